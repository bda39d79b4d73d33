// A-posteriori distance of a few qubit states from rho = diag(1/4, 3/4), and
// the same number obtained as a relative entropy to the Lueders state.

#include <cmath>
#include <cstdio>

#include "gibbsrec/gibbsrec.hpp"

int main() {
  using namespace gibbsrec;
  const auto rho = diagonal_state((RealVector(2) << 0.25, 0.75).finished());
  const double r = 1.0 / std::sqrt(2.0);

  const Vector candidates[] = {Vector{{0.5, std::sqrt(3.0) / 2.0}}, Vector{{r, r}},
                               Vector{{Complex(r), Complex(0.0, r)}}, Vector{{1.0, 0.0}}};
  for (const auto& v : candidates) {
    const auto phi = PureState::from_amplitudes(v);
    const auto d = a_posteriori_distance(rho, phi);
    const auto l = lueders_state(rho, validate_density(projector(phi)));
    std::printf("D = %-22s S(rho || L) = %s\n", d.to_string().c_str(),
                quantum_relative_entropy(rho, l).to_string().c_str());
  }
}
