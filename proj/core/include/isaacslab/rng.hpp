#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "isaacslab/types.hpp"

namespace isaacs {

// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based splittable stream: path i draws from a SplitMix64 sequence
// whose initial state is a hash of (base_seed, i), so paths are independent
// of scheduling order and reproducible individually.
class PathRng {
 public:
  PathRng(std::uint64_t base_seed, std::uint64_t path_index)
      : state_(mix64(mix64(base_seed + 0x9E3779B97F4A7C15ull * (path_index + 1)) ^ path_index)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

  // Uniform in (0, 1]; never 0 so it is safe inside log().
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  // Standard normal via Box-Muller; one draw of the pair is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  void fill_normals(Vec& out) {
    for (int i = 0; i < out.size(); ++i) out(i) = normal();
  }

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace isaacs
