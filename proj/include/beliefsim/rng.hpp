#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "beliefsim/vector.hpp"

namespace beliefsim {

/// What a random stream is used for. Part of the stream key so that
/// different consumers never share draws.
enum class StreamPurpose : std::uint64_t {
  kInit = 1,
  kRespawn = 2,
  kHerdSelect = 3,
  kLeader = 4,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based random stream keyed by (seed, step, agent, purpose).
///
/// Every draw inside a parallel region comes from a stream owned by one
/// agent, so results do not depend on scheduling. Sampling routines are
/// written out here instead of using <random> distributions, whose output
/// differs between standard library implementations.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t step, std::uint64_t agent, StreamPurpose purpose)
      : state_(splitmix64(splitmix64(splitmix64(seed) ^ step) ^ (agent * 0xD1B54A32D192ED03ULL)) ^
               static_cast<std::uint64_t>(purpose)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // Lemire's multiply-shift with rejection.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
      if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Uniformly distributed direction on the unit hypersphere.
  BeliefVector unit_vector(int dimensions) {
    BeliefVector v(dimensions);
    for (;;) {
      for (int k = 0; k < dimensions; ++k) v[k] = normal();
      const double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }

  BeliefVector uniform_box(int dimensions, double half_range) {
    BeliefVector v(dimensions);
    for (int k = 0; k < dimensions; ++k) v[k] = uniform(-half_range, half_range);
    return v;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace beliefsim
