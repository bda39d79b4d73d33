#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>

#include "gibbsrec/error.hpp"
#include "gibbsrec/qcore.hpp"

namespace gibbsrec {

/// A real number or +infinity. Distances in this library are either finite
/// and nonnegative or infinite because a support condition fails.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double value) : value_(value) {}

  static constexpr ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  [[nodiscard]] constexpr bool is_infinite() const noexcept {
    return value_ == std::numeric_limits<double>::infinity();
  }
  [[nodiscard]] constexpr bool is_finite() const noexcept { return !is_infinite(); }

  /// The finite value, or +inf as an IEEE double.
  [[nodiscard]] constexpr double value() const noexcept { return value_; }

  /// Shortest round-trip decimal, with infinity spelled `+inf`.
  [[nodiscard]] std::string to_string() const {
    if (is_infinite()) return "+inf";
    std::ostringstream out;
    out.precision(17);
    out << value_;
    return out.str();
  }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) { return a.value_ == b.value_; }

  friend std::ostream& operator<<(std::ostream& os, ExtendedReal x) { return os << x.to_string(); }

 private:
  double value_ = 0.0;
};

/// Eigenvalues or probabilities at or below this count as outside the support.
inline constexpr double kSupportTolerance = 1e-12;

namespace detail {

inline void check_probability_vector(std::span<const double> p, const char* name) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) {
      throw Error(ErrorKind::NotNormalized, std::string(name) + " has a negative or NaN entry");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw Error(ErrorKind::NotNormalized,
                std::string(name) + " sums to 1 + " + format_magnitude(sum - 1.0));
  }
}

}  // namespace detail

/// Classical relative entropy sum_k p_k ln(p_k / q_k), in nats.
inline ExtendedReal kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorKind::LengthMismatch, "p and q have different lengths");
  }
  detail::check_probability_vector(p, "p");
  detail::check_probability_vector(q, "q");
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0.0) continue;
    if (q[k] == 0.0) return ExtendedReal::infinity();
    total += p[k] * std::log(p[k] / q[k]);
  }
  return ExtendedReal(total);
}

inline double von_neumann_entropy(const SpectralDecomposition& dec) {
  double s = 0.0;
  for (double p : dec.eigenvalues) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::max(s, 0.0);
}

inline double von_neumann_entropy(const DensityOperator& rho) {
  return von_neumann_entropy(spectral_decompose(rho));
}

/// tr[rho (ln rho - ln sigma)], or +inf when supp(rho) is not inside supp(sigma).
///
/// Evaluated in the joint eigen-representation:
///   S = sum_k p_k ln p_k - sum_{k,j} p_k |<f_j|e_k>|^2 ln q_j
/// with (p_k, e_k) and (q_j, f_j) the spectra of rho and sigma. Eigenvalues at
/// or below kSupportTolerance are treated as zero.
inline ExtendedReal quantum_relative_entropy(const DensityOperator& rho,
                                             const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "rho and sigma dimensions differ");
  }
  const auto r = spectral_decompose(rho);
  const auto s = spectral_decompose(sigma);
  // |<f_j|e_k>|^2, rows j over sigma's basis, columns k over rho's.
  const RealMatrix weights = (s.eigenvectors.adjoint() * r.eigenvectors).cwiseAbs2();

  double total = 0.0;
  for (Index k = 0; k < r.dim(); ++k) {
    const double p = r.eigenvalues(k);
    if (p <= kSupportTolerance) continue;
    double inside = 0.0;
    double cross = 0.0;
    for (Index j = 0; j < s.dim(); ++j) {
      const double q = s.eigenvalues(j);
      if (q <= kSupportTolerance) continue;
      inside += weights(j, k);
      cross += weights(j, k) * std::log(q);
    }
    if (1.0 - inside > kSupportTolerance) return ExtendedReal::infinity();
    total += p * std::log(p) - p * cross;
  }
  return ExtendedReal(total);
}

/// Lueders post-measurement state sum_k |e_k><e_k| sigma |e_k><e_k| for the
/// eigenbasis e_k of rho. Inside a degenerate eigenspace of rho the result
/// depends on which orthonormal basis spectral_decompose returned.
inline DensityOperator lueders_state(const SpectralDecomposition& rho_dec,
                                     const DensityOperator& sigma) {
  if (rho_dec.dim() != sigma.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "rho and sigma dimensions differ");
  }
  const Matrix& e = rho_dec.eigenvectors;
  const RealVector diag = (e.adjoint() * sigma.matrix() * e).diagonal().real();
  Matrix out = e * diag.cast<Complex>().asDiagonal() * e.adjoint();
  return validate_density(out, 1e-10);
}

inline DensityOperator lueders_state(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "rho and sigma dimensions differ");
  }
  return lueders_state(spectral_decompose(rho), sigma);
}

/// One summand p_k ln(p_k / t_k) of the a-posteriori distance.
struct DistanceTerm {
  double probability = 0.0;     // p_k
  double squared_overlap = 0.0;  // t_k = |<e_k|phi>|^2
  ExtendedReal contribution;
};

struct DistanceBreakdown {
  ExtendedReal total;
  std::vector<DistanceTerm> terms;
};

/// A-posteriori distance D(rho, phi) = sum_k p_k ln(p_k / |<e_k|phi>|^2),
/// with each term listed. Infinite iff some p_k in the support has
/// |<e_k|phi>|^2 at or below kSupportTolerance.
inline DistanceBreakdown a_posteriori_breakdown(const SpectralDecomposition& dec,
                                                const PureState& phi) {
  const RealVector t = eigenbasis_weights(dec, phi);
  DistanceBreakdown out;
  double total = 0.0;
  bool infinite = false;
  for (Index k = 0; k < dec.dim(); ++k) {
    const double p = dec.eigenvalues(k);
    DistanceTerm term{p, t(k), ExtendedReal(0.0)};
    if (p > kSupportTolerance) {
      if (t(k) <= kSupportTolerance) {
        term.contribution = ExtendedReal::infinity();
        infinite = true;
      } else {
        term.contribution = ExtendedReal(p * std::log(p / t(k)));
        total += term.contribution.value();
      }
    }
    out.terms.push_back(term);
  }
  out.total = infinite ? ExtendedReal::infinity() : ExtendedReal(total);
  return out;
}

inline ExtendedReal a_posteriori_distance(const SpectralDecomposition& dec, const PureState& phi) {
  return a_posteriori_breakdown(dec, phi).total;
}

inline ExtendedReal a_posteriori_distance(const DensityOperator& rho, const PureState& phi) {
  if (rho.dim() != phi.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "rho and phi dimensions differ");
  }
  return a_posteriori_distance(spectral_decompose(rho), phi);
}

}  // namespace gibbsrec
