#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace qgeo {

// SplitMix64 generator. Small state, solid statistical quality for Monte
// Carlo work, and cheap to split: child streams are derived by hashing the
// construction seed with a caller-chosen stream index, so the layout of
// parallel work fixes the random numbers independently of scheduling.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1), 53 bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double next_double_pos() { return 1.0 - next_double(); }

  // Standard normal via Box-Muller (cosine branch only; keeps state flow trivial).
  double next_gaussian() {
    double u1 = next_double_pos();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  double next_exponential() { return -std::log(next_double_pos()); }

  // Child generator for stream `stream`. Distinct streams give independent
  // sequences; derivation uses the construction seed, not the current state,
  // so split(k) means the same thing no matter how much the parent has run.
  SplitMix64 split(std::uint64_t stream) const {
    std::uint64_t s = mix(seed_ ^ mix(stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
    return SplitMix64(s);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace qgeo
