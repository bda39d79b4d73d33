// Draws pure states from the Gibbs ensemble around rho = diag(1/4, 3/4) and
// compares their mean projector with (1 - eps) rho + eps I / 2.

#include <cstdio>

#include "gibbsrec/gibbsrec.hpp"

int main() {
  using namespace gibbsrec;
  const auto rho = diagonal_state((RealVector(2) << 0.25, 0.75).finished());

  for (double eps : {0.5, 0.1, 0.01}) {
    const GibbsParams params(rho, eps);
    const auto est = reconstruct_mc(params, 100000, SeededStream(2024), 4);
    const Matrix target = reconstruct_exact(rho, eps).matrix();
    std::printf("eps = %-5g beta = %-7g  <0|mean|0> = %.5f (exact %.5f)  max |z| = %.2f\n", eps,
                params.beta(), est.mean(0, 0).real(), target(0, 0).real(), est.max_abs_z(target));
  }
}
