#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gibbsrec/entropy.hpp"
#include "gibbsrec/error.hpp"
#include "gibbsrec/qcore.hpp"
#include "gibbsrec/random.hpp"

// Measure convention: dS is the unnormalized surface measure on the unit
// sphere of C^n, with total mass 2 pi^n / Gamma(n). Densities are stated with
// respect to dS; Monte Carlo under uniform sampling multiplies by sphere_area.

namespace gibbsrec {

/// Smallest eigenvalue accepted as full range.
inline constexpr double kFullRangeTolerance = 1e-10;
/// Below this the Dirichlet components become nearly flat; still valid.
inline constexpr double kNearSingularEigenvalue = 1e-6;

/// Surface measure of the unit sphere in C^n: 2 pi^n / Gamma(n).
inline double sphere_area(Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "sphere dimension must be >= 1");
  const double nd = static_cast<double>(n);
  if (n <= 100) return 2.0 * std::pow(std::numbers::pi, nd) / std::tgamma(nd);
  return std::exp(std::log(2.0) + nd * std::log(std::numbers::pi) - std::lgamma(nd));
}

inline double log_sphere_area(Index n) {
  const double nd = static_cast<double>(n);
  return std::log(2.0) + nd * std::log(std::numbers::pi) - std::lgamma(nd);
}

inline void check_epsilon(double epsilon, bool allow_one) {
  const bool ok = epsilon > 0.0 && (allow_one ? epsilon <= 1.0 : epsilon < 1.0);
  if (!ok) {
    throw Error(ErrorKind::EpsilonOutOfRange,
                "epsilon = " + std::to_string(epsilon) + " outside " +
                    (allow_one ? "(0, 1]" : "(0, 1)"));
  }
}

/// Parameters of the Gibbs ensemble mu(phi) = K exp(-beta D(rho, phi)) with
/// beta = n (1 - eps) / eps and Dirichlet exponents a_k = beta p_k.
class GibbsParams {
 public:
  GibbsParams(SpectralDecomposition decomposition, double epsilon)
      : decomposition_(std::move(decomposition)), epsilon_(epsilon) {
    check_epsilon(epsilon_, /*allow_one=*/true);
    const double min_p = decomposition_.min_eigenvalue();
    if (!(min_p > kFullRangeTolerance)) {
      throw Error(ErrorKind::NotFullRange,
                  "smallest eigenvalue " + detail::format_magnitude(min_p) + " is not above " +
                      detail::format_magnitude(kFullRangeTolerance));
    }
    const double n = static_cast<double>(decomposition_.dim());
    beta_ = n * (1.0 - epsilon_) / epsilon_;
    exponents_ = beta_ * decomposition_.eigenvalues;
  }

  GibbsParams(const DensityOperator& rho, double epsilon)
      : GibbsParams(spectral_decompose(rho), epsilon) {}

  [[nodiscard]] const SpectralDecomposition& decomposition() const noexcept {
    return decomposition_;
  }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] const RealVector& dirichlet_exponents() const noexcept { return exponents_; }
  [[nodiscard]] Index dim() const noexcept { return decomposition_.dim(); }

  /// Some eigenvalue is tiny enough that its Dirichlet component is almost
  /// uniform. Results stay valid; callers may want to warn.
  [[nodiscard]] bool near_singular() const {
    return decomposition_.min_eigenvalue() < kNearSingularEigenvalue;
  }

 private:
  SpectralDecomposition decomposition_;
  double epsilon_;
  double beta_ = 0.0;
  RealVector exponents_;
};

namespace detail {

// Writes a Haar-distributed unit vector into `out` without allocating.
inline void fill_haar(Vector& out, SeededStream& rng) {
  for (Index k = 0; k < out.size(); ++k) {
    const double re = rng.normal();
    const double im = rng.normal();
    out(k) = Complex(re, im);
  }
  out /= out.norm();
}

// Fills the eigenbasis coordinates sqrt(t_k) e^{i theta_k} of a Gibbs draw,
// with t ~ Dirichlet(a_1 + 1, ..., a_n + 1).
inline void fill_gibbs_coordinates(Vector& coords, const RealVector& exponents,
                                   SeededStream& rng) {
  double total = 0.0;
  for (Index k = 0; k < coords.size(); ++k) {
    const double g = rng.gamma(exponents(k) + 1.0);
    coords(k) = Complex(g, 0.0);
    total += g;
  }
  for (Index k = 0; k < coords.size(); ++k) {
    coords(k) = std::polar(std::sqrt(coords(k).real() / total), rng.phase());
  }
}

inline void fill_torus_coordinates(Vector& coords, const RealVector& probabilities,
                                   SeededStream& rng) {
  for (Index k = 0; k < coords.size(); ++k) {
    coords(k) = std::polar(std::sqrt(probabilities(k)), rng.phase());
  }
}

}  // namespace detail

/// Uniform (Haar) unit vector: 2n standard normals, normalized.
inline PureState sample_haar(Index n, SeededStream& rng) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "sphere dimension must be >= 1");
  Vector v(n);
  detail::fill_haar(v, rng);
  return PureState::normalized(std::move(v));
}

/// Exact draw from the Gibbs ensemble. Under the Haar law the squared moduli
/// are Dirichlet(1, ..., 1) with independent uniform phases; the weight
/// prod t_k^{a_k} tilts them to Dirichlet(a_1 + 1, ..., a_n + 1).
inline PureState sample_gibbs(const GibbsParams& params, SeededStream& rng) {
  Vector coords(params.dim());
  detail::fill_gibbs_coordinates(coords, params.dirichlet_exponents(), rng);
  return PureState::normalized(params.decomposition().eigenvectors * coords);
}

/// Torus ensemble sum_k e^{i theta_k} sqrt(p_k) e_k with uniform phases.
inline PureState sample_torus(const SpectralDecomposition& dec, SeededStream& rng) {
  Vector coords(dec.dim());
  detail::fill_torus_coordinates(coords, dec.eigenvalues, rng);
  return PureState::normalized(dec.eigenvectors * coords);
}

/// log K for mu(phi) = K exp(-beta D(rho, phi)) as a density against dS:
///
///   log K = log(eps / n) + lgamma(1 + n / eps) - beta S(rho)
///           - log(2 pi^n) - sum_k lgamma(1 + a_k)
///
/// The ln(eps / n) term comes from (1 - eps) rho + eps I / n = (eps / n)(beta rho + I);
/// without it the density does not integrate to one.
inline double log_normalization_K(const GibbsParams& params) {
  const double n = static_cast<double>(params.dim());
  const double eps = params.epsilon();
  double log_k = std::log(eps / n) + std::lgamma(1.0 + n / eps) -
                 params.beta() * von_neumann_entropy(params.decomposition()) - std::log(2.0) -
                 n * std::log(std::numbers::pi);
  for (double a : params.dirichlet_exponents()) log_k -= std::lgamma(1.0 + a);
  return log_k;
}

/// log mu(phi) = log K - beta D(rho, phi); -inf where D is infinite.
inline double gibbs_log_density(const GibbsParams& params, const PureState& phi) {
  if (phi.dim() != params.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state and ensemble dimensions differ");
  }
  // Haar case: the weight is identically one.
  if (params.beta() == 0.0) return log_normalization_K(params);
  const ExtendedReal d = a_posteriori_distance(params.decomposition(), phi);
  if (d.is_infinite()) return -std::numeric_limits<double>::infinity();
  return log_normalization_K(params) - params.beta() * d.value();
}

}  // namespace gibbsrec
