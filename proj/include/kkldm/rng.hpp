#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace kkldm {

/// SplitMix64 finalizer. Used only to turn (seed, trial) pairs into
/// well separated engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-trial random stream. Trial `t` of a run with base seed `s` always
/// sees the same sequence, independent of which thread executes it.
class TrialRng {
 public:
  using result_type = std::uint64_t;

  TrialRng(std::uint64_t seed, std::uint64_t trial)
      : engine_(splitmix64(splitmix64(seed + trial) ^ 0x6a09e667f3bcc909ULL)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// EXP(rate) variate by inversion.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kkldm
