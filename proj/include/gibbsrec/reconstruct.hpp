#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "gibbsrec/entropy.hpp"
#include "gibbsrec/error.hpp"
#include "gibbsrec/estimate.hpp"
#include "gibbsrec/qcore.hpp"
#include "gibbsrec/random.hpp"
#include "gibbsrec/sphere.hpp"

namespace gibbsrec {

/// (1 - eps) rho + eps I / n.
inline DensityOperator reconstruct_exact(const DensityOperator& rho, double epsilon) {
  check_epsilon(epsilon, /*allow_one=*/true);
  const Index n = rho.dim();
  const Matrix mixed = (1.0 - epsilon) * rho.matrix() +
                       (epsilon / static_cast<double>(n)) * Matrix::Identity(n, n);
  return validate_density(mixed, 1e-10);
}

/// First moment of the Gibbs ensemble from the operator-integral closed form:
/// diagonal eps (a_k + 1) / n in the eigenbasis of rho, a_k = n (1 - eps) p_k / eps.
/// Algebraically identical to reconstruct_exact(); kept as a separate route.
inline DensityOperator gibbs_first_moment_oracle(const DensityOperator& rho, double epsilon) {
  check_epsilon(epsilon, /*allow_one=*/false);
  const GibbsParams params(rho, epsilon);
  const double n = static_cast<double>(params.dim());
  const RealVector diag = (epsilon / n) * (params.dirichlet_exponents().array() + 1.0).matrix();
  const Matrix& e = params.decomposition().eigenvectors;
  return validate_density(e * diag.cast<Complex>().asDiagonal() * e.adjoint(), 1e-10);
}

/// Mean projector over exact Gibbs draws; estimates (1 - eps) rho + eps I / n
/// in the computational basis.
inline MatrixEstimate reconstruct_mc(const GibbsParams& params, std::uint64_t samples,
                                     const SeededStream& rng, unsigned shards = 1) {
  check_sample_count(samples);
  const Index n = params.dim();
  const Matrix& basis = params.decomposition().eigenvectors;
  const auto moments =
      run_sharded(samples, shards, rng, [&](SeededStream& stream, std::uint64_t count) {
        MatrixMoments acc(n);
        Vector coords(n);
        Vector phi(n);
        Matrix sample(n, n);
        for (std::uint64_t s = 0; s < count; ++s) {
          detail::fill_gibbs_coordinates(coords, params.dirichlet_exponents(), stream);
          phi.noalias() = basis * coords;
          phi /= phi.norm();
          sample.noalias() = phi * phi.adjoint();
          acc.push(sample);
        }
        return acc;
      });
  return moments.finish();
}

inline MatrixEstimate reconstruct_mc(const DensityOperator& rho, double epsilon,
                                     std::uint64_t samples, const SeededStream& rng,
                                     unsigned shards = 1) {
  return reconstruct_mc(GibbsParams(rho, epsilon), samples, rng, shards);
}

namespace detail {

// Sums for a self-normalized importance-sampling ratio estimate of every
// matrix entry: sum w, sum w^2 and, per entry, sum w x, sum w^2 x, sum w^2 x^2.
class WeightedMatrixSums {
 public:
  explicit WeightedMatrixSums(Index n)
      : n_(n), wx_(Matrix::Zero(n, n)), w2x_(Matrix::Zero(n, n)),
        w2x2_re_(RealMatrix::Zero(n, n)), w2x2_im_(RealMatrix::Zero(n, n)) {}

  void push(double w, const Matrix& x) {
    ++count_;
    w_ += w;
    w2_ += w * w;
    wx_ += w * x;
    w2x_ += (w * w) * x;
    w2x2_re_ += (w * w) * x.real().cwiseAbs2();
    w2x2_im_ += (w * w) * x.imag().cwiseAbs2();
  }

  void merge(const WeightedMatrixSums& o) {
    count_ += o.count_;
    w_ += o.w_;
    w2_ += o.w2_;
    wx_ += o.wx_;
    w2x_ += o.w2x_;
    w2x2_re_ += o.w2x2_re_;
    w2x2_im_ += o.w2x2_im_;
  }

  // Ratio estimate mu = sum w x / sum w with delta-method standard error
  // sqrt(sum w^2 (x - mu)^2) / sum w, per real and imaginary part.
  [[nodiscard]] MatrixEstimate finish() const {
    MatrixEstimate out;
    out.samples = count_;
    out.mean = wx_ / w_;
    out.standard_errors.resize(n_, n_);
    for (Index i = 0; i < n_; ++i) {
      for (Index j = 0; j < n_; ++j) {
        const Complex mu = out.mean(i, j);
        const double var_re = w2x2_re_(i, j) - 2.0 * mu.real() * w2x_(i, j).real() +
                              mu.real() * mu.real() * w2_;
        const double var_im = w2x2_im_(i, j) - 2.0 * mu.imag() * w2x_(i, j).imag() +
                              mu.imag() * mu.imag() * w2_;
        out.standard_errors(i, j) =
            std::sqrt(std::max({var_re, var_im, 0.0})) / w_;
      }
    }
    out.mean = ((out.mean + out.mean.adjoint()) / 2.0).eval();
    return out;
  }

 private:
  Index n_;
  std::uint64_t count_ = 0;
  double w_ = 0.0;
  double w2_ = 0.0;
  Matrix wx_;
  Matrix w2x_;
  RealMatrix w2x2_re_;
  RealMatrix w2x2_im_;
};

}  // namespace detail

/// Independent route to the same first moment: Haar draws weighted by
/// exp(-beta D(rho, phi)), self-normalized. Much higher variance than
/// reconstruct_mc() for small eps; shares no sampling code with it.
inline MatrixEstimate reconstruct_importance(const GibbsParams& params, std::uint64_t samples,
                                             const SeededStream& rng, unsigned shards = 1) {
  check_sample_count(samples);
  const Index n = params.dim();
  const auto sums =
      run_sharded(samples, shards, rng, [&](SeededStream& stream, std::uint64_t count) {
        detail::WeightedMatrixSums acc(n);
        for (std::uint64_t s = 0; s < count; ++s) {
          const PureState phi = sample_haar(n, stream);
          const ExtendedReal d = a_posteriori_distance(params.decomposition(), phi);
          const double w = d.is_infinite() ? 0.0 : std::exp(-params.beta() * d.value());
          acc.push(w, projector(phi));
        }
        return acc;
      });
  return sums.finish();
}

/// Mean projector over the torus ensemble, expressed in the eigenbasis of the
/// decomposition. Diagonal entries equal p_k up to rounding for every draw.
inline MatrixEstimate torus_mc(const SpectralDecomposition& dec, std::uint64_t samples,
                               const SeededStream& rng, unsigned shards = 1) {
  check_sample_count(samples);
  if (!(dec.min_eigenvalue() > kFullRangeTolerance)) {
    throw Error(ErrorKind::NotFullRange, "torus ensemble needs a full-range state");
  }
  const Index n = dec.dim();
  const auto moments =
      run_sharded(samples, shards, rng, [&](SeededStream& stream, std::uint64_t count) {
        MatrixMoments acc(n);
        Vector coords(n);
        Matrix sample(n, n);
        for (std::uint64_t s = 0; s < count; ++s) {
          detail::fill_torus_coordinates(coords, dec.eigenvalues, stream);
          sample.noalias() = coords * coords.adjoint();
          acc.push(sample);
        }
        return acc;
      });
  return moments.finish();
}

inline MatrixEstimate torus_mc(const DensityOperator& rho, std::uint64_t samples,
                               const SeededStream& rng, unsigned shards = 1) {
  return torus_mc(spectral_decompose(rho), samples, rng, shards);
}

/// Real two-dimensional uniform ensemble: the four vectors (+-sqrt p1, +-sqrt p2)
/// with equal weight.
struct DiscreteRealEnsemble {
  std::array<Eigen::Vector2d, 4> vectors;
  Eigen::Matrix2d average_projector;
};

inline DiscreteRealEnsemble discrete_real_ensemble(double p1, double p2) {
  if (!(p1 > 0.0) || !(p2 > 0.0) || std::abs(p1 + p2 - 1.0) > kStateTolerance) {
    throw Error(ErrorKind::NotNormalized, "need p1, p2 > 0 with p1 + p2 = 1");
  }
  const double a = std::sqrt(p1);
  const double b = std::sqrt(p2);
  DiscreteRealEnsemble out;
  out.vectors = {Eigen::Vector2d(a, b), Eigen::Vector2d(a, -b), Eigen::Vector2d(-a, b),
                 Eigen::Vector2d(-a, -b)};
  out.average_projector.setZero();
  for (const auto& v : out.vectors) out.average_projector += v * v.transpose();
  out.average_projector /= 4.0;
  return out;
}

}  // namespace gibbsrec
