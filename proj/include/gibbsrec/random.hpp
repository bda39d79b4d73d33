#pragma once

#include <cstdint>
#include <numbers>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace gibbsrec {

/// splitmix64 finalizer of (seed, key); nearby inputs map to unrelated outputs.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (key + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Reproducible random source identified by (seed, substream).
///
/// The engine and the distribution transforms come from Boost.Random, whose
/// algorithms are fixed in the headers; the std:: distributions are
/// implementation-defined and would break cross-platform reproducibility.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t seed, std::uint64_t substream = 0)
      : seed_(seed), substream_(substream), engine_(derive_seed(seed, substream)) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t substream() const noexcept { return substream_; }

  /// Stream for shard `index` of the same seed.
  [[nodiscard]] SeededStream fork(std::uint64_t index) const { return SeededStream(seed_, index); }

  /// Uniform on [0, 1).
  double uniform() { return boost::random::uniform_01<double>{}(engine_); }

  double normal() { return normal_(engine_); }

  /// Gamma(shape, 1) variate; shape > 0.
  double gamma(double shape) {
    return boost::random::gamma_distribution<double>(shape, 1.0)(engine_);
  }

  /// Uniform phase on [0, 2 pi).
  double phase() { return 2.0 * std::numbers::pi * uniform(); }

 private:
  std::uint64_t seed_;
  std::uint64_t substream_;
  boost::random::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace gibbsrec
