#pragma once

#include <cmath>
#include <cstdint>

namespace sigstop {

// splitmix64: counter-based generator with 64-bit state.  Per-path substreams
// are derived from (seed, stream index) so batches are reproducible for any
// thread count.  Normal variates use the Marsaglia polar method.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Substream for path `idx` under master `seed`: the start state is the
  // (idx+1)-th output of a master splitmix sequence, so distinct streams sit
  // at avalanche-mixed positions of the +gamma orbit and cannot run in
  // lockstep (the naive seed^idx construction does, and correlates paths).
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t idx) {
    return SplitMix64(mix(seed + 0x9E3779B97F4A7C15ull * (idx + 1)));
  }

  std::uint64_t next() { return mix(state_ += 0x9E3779B97F4A7C15ull); }

  // uniform on (0,1)
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // uniform on (-1,1)
  double uniform_sym() { return 2.0 * uniform() - 1.0; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = uniform_sym();
      v = uniform_sym();
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sigstop
