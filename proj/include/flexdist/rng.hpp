#pragma once

#include <cstdint>
#include <random>

namespace flexdist {

/// Seeded 64-bit generator shared by every sampler in the library.
///
/// Variates are produced from the raw 64-bit stream with fixed algorithms
/// (no std::*_distribution), so a seed determines the output bit-for-bit on
/// every platform. A generator is not thread-safe; use one per thread.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for (seed, index) pairs, e.g. bootstrap replicates.
  static Rng for_stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Gamma(shape, scale = 1), Marsaglia-Tsang.
  double gamma(double shape);
  double student_t(double nu);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace flexdist
