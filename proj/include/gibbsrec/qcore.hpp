#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gibbsrec/error.hpp"

namespace gibbsrec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kStateTolerance = 1e-12;
inline constexpr double kClusterTolerance = 1e-9;

namespace detail {

inline std::string format_magnitude(double value) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << value;
  return out.str();
}

inline double hermitian_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Unit-norm amplitude vector.
class PureState {
 public:
  /// Wraps `amplitudes` after checking that its norm is one within `tol`.
  static PureState from_amplitudes(Vector amplitudes, double tol = kStateTolerance) {
    if (amplitudes.size() < 1) {
      throw Error(ErrorKind::InvalidArgument, "pure state needs dimension >= 1");
    }
    const double defect = std::abs(amplitudes.squaredNorm() - 1.0);
    if (!(defect <= tol)) {
      throw Error(ErrorKind::NotNormalized,
                  "squared norm deviates from 1 by " + detail::format_magnitude(defect));
    }
    return PureState(std::move(amplitudes));
  }

  /// Rescales a nonzero vector to unit norm.
  static PureState normalized(Vector amplitudes) {
    const double norm = amplitudes.norm();
    if (amplitudes.size() < 1 || !(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorKind::InvalidArgument, "cannot normalize a zero or non-finite vector");
    }
    amplitudes /= norm;
    return PureState(std::move(amplitudes));
  }

  [[nodiscard]] const Vector& amplitudes() const noexcept { return amplitudes_; }
  [[nodiscard]] Index dim() const noexcept { return amplitudes_.size(); }
  [[nodiscard]] Complex operator[](Index k) const { return amplitudes_(k); }

 private:
  explicit PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {}

  Vector amplitudes_;
};

/// Hermitian, positive semidefinite, trace-one matrix. Only obtainable
/// through validate_density() or the named constructors below.
class DensityOperator {
 public:
  [[nodiscard]] const Matrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] Index dim() const noexcept { return matrix_.rows(); }

 private:
  explicit DensityOperator(Matrix m) : matrix_(std::move(m)) {}

  friend DensityOperator validate_density(const Matrix& matrix, double tol);
  friend DensityOperator white_noise(Index n);

  Matrix matrix_;
};

/// Checks the three density-operator invariants and stores the
/// symmetrized matrix (M + M^dagger) / 2.
inline DensityOperator validate_density(const Matrix& matrix, double tol = kStateTolerance) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
    throw Error(ErrorKind::DimensionMismatch, "density matrix must be square and non-empty");
  }
  if (!matrix.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "density matrix has non-finite entries");
  }
  const double asym = detail::hermitian_defect(matrix);
  if (asym > tol) {
    throw Error(ErrorKind::NotHermitian,
                "max |M - M^dagger| entry is " + detail::format_magnitude(asym));
  }
  Matrix sym = (matrix + matrix.adjoint()) / 2.0;

  const double trace_defect = std::abs(sym.trace() - Complex(1.0, 0.0));
  if (trace_defect > tol) {
    throw Error(ErrorKind::NotTraceOne,
                "|trace - 1| is " + detail::format_magnitude(trace_defect));
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -tol) {
    throw Error(ErrorKind::NotPositive,
                "smallest eigenvalue is " + detail::format_magnitude(min_eig));
  }
  return DensityOperator(std::move(sym));
}

/// Completely mixed state I/n.
inline DensityOperator white_noise(Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "white noise needs n >= 1");
  return DensityOperator(Matrix::Identity(n, n) / static_cast<double>(n));
}

/// Eigenvalues closer than the cluster tolerance, as a contiguous run of
/// indices into the descending spectrum.
struct DegeneracyGroup {
  Index first = 0;
  Index size = 1;
};

struct SpectralDecomposition {
  RealVector eigenvalues;  // descending, clamped to [0, 1]
  Matrix eigenvectors;     // column k pairs with eigenvalues(k)
  double cluster_tolerance = kClusterTolerance;
  std::vector<DegeneracyGroup> groups;

  [[nodiscard]] Index dim() const noexcept { return eigenvalues.size(); }

  [[nodiscard]] bool degenerate() const noexcept {
    return std::any_of(groups.begin(), groups.end(),
                       [](const DegeneracyGroup& g) { return g.size > 1; });
  }

  [[nodiscard]] Matrix reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
  }

  [[nodiscard]] double min_eigenvalue() const { return eigenvalues.minCoeff(); }
};

namespace detail {

inline std::vector<DegeneracyGroup> cluster(const RealVector& descending, double tol) {
  std::vector<DegeneracyGroup> groups;
  for (Index k = 0; k < descending.size(); ++k) {
    if (!groups.empty() && descending(k - 1) - descending(k) < tol) {
      ++groups.back().size;
    } else {
      groups.push_back({k, 1});
    }
  }
  return groups;
}

// Fix the phase freedom so the largest-magnitude component is real positive.
inline void canonicalize_phases(Matrix& columns) {
  for (Index c = 0; c < columns.cols(); ++c) {
    Index pivot = 0;
    columns.col(c).cwiseAbs().maxCoeff(&pivot);
    const Complex z = columns(pivot, c);
    if (std::abs(z) > 0.0) columns.col(c) *= std::conj(z) / std::abs(z);
  }
}

}  // namespace detail

inline SpectralDecomposition spectral_decompose(const DensityOperator& rho,
                                                double cluster_tol = kClusterTolerance) {
  const Index n = rho.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());

  SpectralDecomposition out;
  out.cluster_tolerance = cluster_tol;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  // Eigen sorts ascending.
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = std::clamp(solver.eigenvalues()(n - 1 - k), 0.0, 1.0);
    out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  detail::canonicalize_phases(out.eigenvectors);
  out.groups = detail::cluster(out.eigenvalues, cluster_tol);
  return out;
}

/// Builds a decomposition from a caller-chosen orthonormal basis, e.g. to
/// fix the basis inside a degenerate eigenspace. Eigenvalues are sorted
/// descending together with their columns.
inline SpectralDecomposition make_decomposition(const RealVector& eigenvalues, const Matrix& basis,
                                                double cluster_tol = kClusterTolerance) {
  const Index n = eigenvalues.size();
  if (basis.rows() != n || basis.cols() != n || n < 1) {
    throw Error(ErrorKind::DimensionMismatch, "basis must be n x n for n eigenvalues");
  }
  const double ortho = (basis.adjoint() * basis - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (ortho > 1e-10) {
    throw Error(ErrorKind::InvalidArgument,
                "basis is not orthonormal, defect " + detail::format_magnitude(ortho));
  }
  if ((eigenvalues.array() < 0.0).any() || std::abs(eigenvalues.sum() - 1.0) > kStateTolerance) {
    throw Error(ErrorKind::NotNormalized, "eigenvalues must be nonnegative and sum to 1");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return eigenvalues(a) > eigenvalues(b); });

  SpectralDecomposition out;
  out.cluster_tolerance = cluster_tol;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = eigenvalues(order[static_cast<std::size_t>(k)]);
    out.eigenvectors.col(k) = basis.col(order[static_cast<std::size_t>(k)]);
  }
  out.groups = detail::cluster(out.eigenvalues, cluster_tol);
  return out;
}

inline Matrix projector(const PureState& phi) {
  return phi.amplitudes() * phi.amplitudes().adjoint();
}

/// <phi|rho|phi>, clamped into [0, 1].
inline double overlap(const PureState& phi, const DensityOperator& rho) {
  if (phi.dim() != rho.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state and operator dimensions differ");
  }
  const Complex value = phi.amplitudes().dot(rho.matrix() * phi.amplitudes());
  return std::clamp(value.real(), 0.0, 1.0);
}

/// Squared moduli |<e_k|phi>|^2 in the decomposition's eigenbasis.
inline RealVector eigenbasis_weights(const SpectralDecomposition& dec, const PureState& phi) {
  if (phi.dim() != dec.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state and decomposition dimensions differ");
  }
  return (dec.eigenvectors.adjoint() * phi.amplitudes()).cwiseAbs2();
}

/// Diagonal density operator with the given probabilities.
inline DensityOperator diagonal_state(const RealVector& probabilities) {
  return validate_density(probabilities.cast<Complex>().asDiagonal().toDenseMatrix());
}

}  // namespace gibbsrec
