#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "gibbsrec/error.hpp"
#include "gibbsrec/qcore.hpp"
#include "gibbsrec/random.hpp"

namespace gibbsrec {

/// Running mean and sum of squared deviations (Welford), mergeable with
/// Chan's pairwise update.
struct RunningMoments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const RunningMoments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double n = na + nb;
    const double delta = other.mean - mean;
    mean += delta * nb / n;
    m2 += other.m2 + delta * delta * na * nb / n;
    count += other.count;
  }

  [[nodiscard]] double variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
  [[nodiscard]] double standard_error() const {
    return count > 0 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

struct ScalarEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;

  /// |estimate - target| / SE; 0 or +inf when SE vanishes.
  [[nodiscard]] double z_score(double target) const {
    const double diff = std::abs(estimate - target);
    if (standard_error > 0.0) return diff / standard_error;
    return diff <= 1e-12 * std::max(1.0, std::abs(target)) ? 0.0
                                                           : std::numeric_limits<double>::infinity();
  }
};

/// Entrywise Monte Carlo mean of a complex matrix with per-entry standard
/// errors (the larger of the real- and imaginary-part errors).
struct MatrixEstimate {
  Matrix mean;
  RealMatrix standard_errors;
  std::uint64_t samples = 0;

  [[nodiscard]] Index dim() const noexcept { return mean.rows(); }

  /// Entrywise |mean - target| / SE. An entry with zero SE scores 0 when it
  /// matches the target to 1e-12 and +inf otherwise.
  [[nodiscard]] RealMatrix z_scores(const Matrix& target) const {
    RealMatrix z(mean.rows(), mean.cols());
    for (Index i = 0; i < mean.rows(); ++i) {
      for (Index j = 0; j < mean.cols(); ++j) {
        const double diff = std::abs(mean(i, j) - target(i, j));
        const double se = standard_errors(i, j);
        if (se > 0.0) {
          z(i, j) = diff / se;
        } else {
          z(i, j) = diff <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
        }
      }
    }
    return z;
  }

  [[nodiscard]] double max_abs_z(const Matrix& target) const { return z_scores(target).maxCoeff(); }
};

/// Entrywise accumulator for matrix-valued samples.
class MatrixMoments {
 public:
  explicit MatrixMoments(Index n) : n_(n), re_(static_cast<std::size_t>(n * n)), im_(re_.size()) {}

  void push(const Matrix& sample) {
    for (Index j = 0; j < n_; ++j) {
      for (Index i = 0; i < n_; ++i) {
        const auto idx = static_cast<std::size_t>(j * n_ + i);
        re_[idx].push(sample(i, j).real());
        im_[idx].push(sample(i, j).imag());
      }
    }
  }

  void merge(const MatrixMoments& other) {
    for (std::size_t k = 0; k < re_.size(); ++k) {
      re_[k].merge(other.re_[k]);
      im_[k].merge(other.im_[k]);
    }
  }

  [[nodiscard]] std::uint64_t count() const { return re_.empty() ? 0 : re_.front().count; }

  /// Mean symmetrized to (M + M^dagger) / 2.
  [[nodiscard]] MatrixEstimate finish() const {
    MatrixEstimate out;
    out.mean.resize(n_, n_);
    out.standard_errors.resize(n_, n_);
    for (Index j = 0; j < n_; ++j) {
      for (Index i = 0; i < n_; ++i) {
        const auto idx = static_cast<std::size_t>(j * n_ + i);
        out.mean(i, j) = Complex(re_[idx].mean, im_[idx].mean);
        out.standard_errors(i, j) =
            std::max(re_[idx].standard_error(), im_[idx].standard_error());
      }
    }
    out.mean = ((out.mean + out.mean.adjoint()) / 2.0).eval();
    out.samples = count();
    return out;
  }

 private:
  Index n_;
  std::vector<RunningMoments> re_;
  std::vector<RunningMoments> im_;
};

inline void check_sample_count(std::uint64_t samples) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "sample count must be >= 2");
}

/// Splits `samples` across `shards` substreams of `rng`'s seed, runs
/// `work(stream, count)` for each shard (in parallel threads) and merges the
/// per-shard accumulators in shard order. The result depends only on
/// (seed, samples, shards); shard k always uses substream k.
///
/// `work` must return an accumulator type with a merge() member.
template <class Work>
auto run_sharded(std::uint64_t samples, unsigned shards, const SeededStream& rng, Work&& work) {
  if (shards < 1) shards = 1;
  if (shards > samples) shards = static_cast<unsigned>(samples);
  using Acc = decltype(work(std::declval<SeededStream&>(), std::uint64_t{}));

  std::vector<std::uint64_t> counts(shards, samples / shards);
  for (std::uint64_t k = 0; k < samples % shards; ++k) ++counts[k];

  std::vector<std::optional<Acc>> partial(shards);
  std::vector<std::exception_ptr> failures(shards);
  auto run_one = [&](unsigned k) {
    try {
      SeededStream stream = rng.fork(k);
      partial[k].emplace(work(stream, counts[k]));
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };
  if (shards == 1) {
    run_one(0);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(shards);
    for (unsigned k = 0; k < shards; ++k) workers.emplace_back(run_one, k);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  Acc total = std::move(*partial[0]);
  for (unsigned k = 1; k < shards; ++k) total.merge(*partial[k]);
  return total;
}

}  // namespace gibbsrec
