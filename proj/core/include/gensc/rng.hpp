#pragma once

#include <cstdint>
#include <random>

namespace gensc {

// Seedable generator with platform-independent derived distributions.
// std::normal_distribution and friends are implementation-defined, so every
// variate used by the toolkit is derived here from raw mt19937_64 output to
// keep pinned-seed experiments byte-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Uniform on [lo, hi].
  double uniform(double lo, double hi);

  // Uniform integer on [0, n), unbiased (rejection sampling). n > 0.
  std::uint64_t uniform_index(std::uint64_t n);

  // Standard normal via the Box-Muller transform.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace gensc
