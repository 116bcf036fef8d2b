#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace hhc {

// splitmix64 step; also used to mix stream identifiers into seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent named random stream. Distributions are hand-rolled so that a
// given (seed, replication, station, purpose) tuple yields the same draws on
// any platform.
class RandomStream {
 public:
  RandomStream() : state_(0) {}
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  static RandomStream derive(std::uint64_t seed, std::uint64_t replication,
                             std::uint64_t station, std::uint64_t purpose) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= 0x243f6a8885a308d3ull * (replication + 1);
    splitmix64(s);
    s ^= 0x13198a2e03707344ull * (station + 1);
    splitmix64(s);
    s ^= 0xa4093822299f31d0ull * (purpose + 1);
    splitmix64(s);
    return RandomStream(s);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1)
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller, one variate per pair of uniforms
  double normal(double mean, double sd) {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double u2 = uniform01();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + sd * z;
  }

  // Normal truncated to positive values: resample, clamp as a last resort.
  double normal_truncated_positive(double mean, double sd) {
    for (int i = 0; i < 100; ++i) {
      double x = normal(mean, sd);
      if (x > 0.0) return x;
    }
    return 0.01 * mean;
  }

  double exponential(double mean) {
    double u = uniform01();
    while (u <= 0.0) u = uniform01();
    return -mean * std::log(u);
  }

  double triangular(double lo, double mode, double hi) {
    double u = uniform01();
    double fc = (mode - lo) / (hi - lo);
    if (u < fc) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
    return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
  }

 private:
  std::uint64_t state_;
};

}  // namespace hhc
