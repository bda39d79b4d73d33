#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gibbsrec/error.hpp"
#include "gibbsrec/estimate.hpp"
#include "gibbsrec/qcore.hpp"
#include "gibbsrec/random.hpp"
#include "gibbsrec/sphere.hpp"

namespace gibbsrec {

/// Exponents a_1..a_n >= 0 of the sphere moment prod_k |<e_k|z>|^{2 a_k}.
class MomentExponents {
 public:
  explicit MomentExponents(std::vector<double> a) : a_(std::move(a)) {
    if (a_.empty()) throw Error(ErrorKind::InvalidArgument, "need at least one exponent");
    for (double x : a_) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw Error(ErrorKind::InvalidArgument, "exponents must be finite and >= 0");
      }
    }
  }

  [[nodiscard]] std::span<const double> values() const noexcept { return a_; }
  [[nodiscard]] Index dim() const noexcept { return static_cast<Index>(a_.size()); }
  [[nodiscard]] double operator[](std::size_t k) const { return a_[k]; }
  [[nodiscard]] double sum() const {
    double s = 0.0;
    for (double x : a_) s += x;
    return s;
  }

  /// Copy with a_k raised by one.
  [[nodiscard]] MomentExponents raised(std::size_t k) const {
    auto copy = a_;
    copy.at(k) += 1.0;
    return MomentExponents(std::move(copy));
  }

  /// First n - 1 exponents.
  [[nodiscard]] MomentExponents leading() const {
    if (a_.size() < 2) throw Error(ErrorKind::DimensionTooSmall, "need n >= 2");
    return MomentExponents(std::vector<double>(a_.begin(), a_.end() - 1));
  }

 private:
  std::vector<double> a_;
};

/// ln of prod Gamma(a_k + 1) / Gamma(n + sum a).
inline double log_moment_ratio(const MomentExponents& a) {
  double log_ratio = -std::lgamma(static_cast<double>(a.dim()) + a.sum());
  for (double x : a.values()) log_ratio += std::lgamma(x + 1.0);
  return log_ratio;
}

/// Integral over the unit sphere of C^n of prod_k |<e_k|z>|^{2 a_k} dS:
///   2 pi^n prod Gamma(a_k + 1) / Gamma(n + sum a).
inline double closed_form_moment(const MomentExponents& a) {
  const double n = static_cast<double>(a.dim());
  return 2.0 * std::pow(std::numbers::pi, n) * std::exp(log_moment_ratio(a));
}

/// Right-hand side of the dimension recurrence
///   I_n = pi Gamma(a_n + 1) Gamma(n - 1 + sum_{k<n} a_k) / Gamma(n + sum a) * I_{n-1}.
inline double moment_recurrence_rhs(const MomentExponents& a) {
  if (a.dim() < 2) throw Error(ErrorKind::DimensionTooSmall, "recurrence needs n >= 2");
  const double n = static_cast<double>(a.dim());
  const double last = a[static_cast<std::size_t>(a.dim() - 1)];
  const double head_sum = a.sum() - last;
  const double log_factor =
      std::lgamma(last + 1.0) + std::lgamma(n - 1.0 + head_sum) - std::lgamma(n + a.sum());
  return std::numbers::pi * std::exp(log_factor) * closed_form_moment(a.leading());
}

/// Closed form of int_0^{pi/2} sin^{2 alpha + 1} x cos^{2 beta + 1} x dx.
inline double legendre_integral(double alpha, double beta) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha and beta must be >= 0");
  }
  return 0.5 * std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                        std::lgamma(alpha + beta + 2.0));
}

/// Adaptive Gauss-Kronrod evaluation of the same integral, for cross-checking
/// legendre_integral().
inline double legendre_quadrature(double alpha, double beta, double tol = 1e-12) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha and beta must be >= 0");
  }
  auto integrand = [=](double x) {
    return std::pow(std::sin(x), 2.0 * alpha + 1.0) * std::pow(std::cos(x), 2.0 * beta + 1.0);
  };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, std::numbers::pi / 2.0, 30, tol, &error);
  return value;
}

namespace detail {

// Eigen-decomposition of a PSD Hermitian matrix, eigenvalues descending and
// clamped at zero. Throws NotPositive for eigenvalues below -1e-12.
struct PsdSpectrum {
  RealVector values;
  Matrix vectors;
};

inline PsdSpectrum psd_spectrum(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw Error(ErrorKind::DimensionMismatch, "operator must be square and non-empty");
  }
  const double asym = hermitian_defect(a);
  if (asym > 1e-10) {
    throw Error(ErrorKind::NotHermitian, "max |A - A^dagger| entry is " + format_magnitude(asym));
  }
  const Matrix sym = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  const Index n = a.rows();
  PsdSpectrum out{RealVector(n), Matrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    const double v = solver.eigenvalues()(n - 1 - k);
    if (v < -1e-12) {
      throw Error(ErrorKind::NotPositive, "eigenvalue " + format_magnitude(v) + " is negative");
    }
    out.values(k) = std::max(v, 0.0);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  canonicalize_phases(out.vectors);
  return out;
}

}  // namespace detail

/// Operator integral of prod_k |<e_k|phi>|^{2 a_k} |phi><phi| dS over the
/// sphere, where (a_k, e_k) is the spectrum of the PSD matrix A:
///   2 pi^n prod Gamma(1 + a_k) / Gamma(1 + n + tr A) * (A + I).
inline Matrix closed_form_operator_integral(const Matrix& a) {
  const auto spec = detail::psd_spectrum(a);
  const Index n = a.rows();
  const double nd = static_cast<double>(n);
  double log_prefactor = std::log(2.0) + nd * std::log(std::numbers::pi) -
                         std::lgamma(1.0 + nd + spec.values.sum());
  for (double x : spec.values) log_prefactor += std::lgamma(1.0 + x);
  const Matrix sym = (a + a.adjoint()) / 2.0;
  return std::exp(log_prefactor) * (sym + Matrix::Identity(n, n));
}

/// Monte Carlo estimate of closed_form_moment() from Haar draws:
/// sphere_area(n) times the sample mean of prod_k |z_k|^{2 a_k}.
inline ScalarEstimate mc_moment(const MomentExponents& a, std::uint64_t samples,
                                const SeededStream& rng, unsigned shards = 1) {
  check_sample_count(samples);
  const Index n = a.dim();
  const auto moments = run_sharded(samples, shards, rng, [&](SeededStream& stream,
                                                             std::uint64_t count) {
    RunningMoments acc;
    Vector z(n);
    for (std::uint64_t s = 0; s < count; ++s) {
      detail::fill_haar(z, stream);
      double w = 1.0;
      for (Index k = 0; k < n; ++k) w *= std::pow(std::norm(z(k)), a[static_cast<std::size_t>(k)]);
      acc.push(w);
    }
    return acc;
  });
  const double area = sphere_area(n);
  return {area * moments.mean, area * moments.standard_error(), moments.count};
}

/// Monte Carlo estimate of closed_form_operator_integral(A).
///
/// The estimate is expressed in the eigenbasis of A (eigenvalues descending,
/// the basis returned alongside), where the exact integral is diagonal.
struct OperatorIntegralEstimate {
  MatrixEstimate estimate;
  Matrix eigenbasis;
  RealVector exponents;
};

inline OperatorIntegralEstimate mc_operator_integral(const Matrix& a, std::uint64_t samples,
                                                     const SeededStream& rng,
                                                     unsigned shards = 1) {
  check_sample_count(samples);
  const auto spec = detail::psd_spectrum(a);
  const Index n = a.rows();
  const double area = sphere_area(n);
  // Haar measure is unitarily invariant, so coordinates in the eigenbasis
  // are themselves Haar distributed.
  const auto moments =
      run_sharded(samples, shards, rng, [&](SeededStream& stream, std::uint64_t count) {
        MatrixMoments acc(n);
        Vector z(n);
        Matrix sample(n, n);
        for (std::uint64_t s = 0; s < count; ++s) {
          detail::fill_haar(z, stream);
          double w = area;
          for (Index k = 0; k < n; ++k) w *= std::pow(std::norm(z(k)), spec.values(k));
          sample.noalias() = w * z * z.adjoint();
          acc.push(sample);
        }
        return acc;
      });
  return {moments.finish(), spec.vectors, spec.values};
}

}  // namespace gibbsrec
