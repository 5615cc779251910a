#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "kkldm/exact_recursion.hpp"
#include "kkldm/rng.hpp"

namespace kkldm {

/// Positive real stored as its natural log; used once lambda values leave double range.
class LogReal {
 public:
  LogReal() = default;
  explicit LogReal(double value) : log_(std::log(value)) {}
  static LogReal from_log(double log_value) {
    LogReal r;
    r.log_ = log_value;
    return r;
  }

  double log() const { return log_; }
  double value() const { return std::exp(log_); }

  friend LogReal operator+(const LogReal& a, const LogReal& b) {
    const double hi = std::max(a.log_, b.log_);
    const double lo = std::min(a.log_, b.log_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }
  friend LogReal operator*(const LogReal& a, const LogReal& b) { return from_log(a.log_ + b.log_); }
  friend LogReal operator/(const LogReal& a, const LogReal& b) { return from_log(a.log_ - b.log_); }
  friend bool operator<(const LogReal& a, const LogReal& b) { return a.log_ < b.log_; }

 private:
  double log_ = 0.0;
};

inline double as_double(double x) { return x; }
inline double as_double(const LogReal& x) { return x.value(); }

/// Branch index for a tuple of length m >= 3 from one uniform u in [0, 1):
/// P(k <= l) = 1 - prod_{j<=l} l_j / (l_j + l_m) for l < m - 1.
template <class T>
std::size_t draw_k(std::span<const T> lambdas, double u) {
  const std::size_t m = lambdas.size();
  const double threshold = 1.0 - u;
  const T& last = lambdas[m - 1];
  double survive = 1.0;
  for (std::size_t l = 1; l + 1 < m; ++l) {
    survive *= as_double(lambdas[l - 1] / (lambdas[l - 1] + last));
    if (survive < threshold) return l;
  }
  return m - 1;
}

/// One random path through the branch tree.
template <class T>
class WalkState {
 public:
  WalkState(int n, std::uint64_t seed, std::uint64_t trial)
      : lambdas_(static_cast<std::size_t>(n), T(1.0)), rng_(seed, trial) {
    scratch_.reserve(lambdas_.size());
  }

  std::span<const T> lambdas() const { return lambdas_; }
  std::size_t step_count() const { return step_; }
  bool done() const { return lambdas_.size() <= 2; }
  TrialRng& rng() { return rng_; }

  std::size_t draw_k() { return kkldm::draw_k(std::span<const T>(lambdas_), rng_.uniform()); }

  /// Draws k and applies the transition; returns k.
  std::size_t step() {
    const std::size_t k = draw_k();
    transition_into(std::span<const T>(lambdas_), k, scratch_);
    lambdas_.swap(scratch_);
    ++step_;
    return k;
  }

 private:
  std::vector<T> lambdas_;
  std::vector<T> scratch_;
  std::size_t step_ = 0;
  TrialRng rng_;
};

struct WalkOutcome {
  double ln_lambda2 = 0.0;
  double lambda2 = 1.0;  // +inf only when ln_lambda2 exceeds double range
  bool log_domain = false;
};

/// Whether walks at this n switch to log-domain lambdas (ln^2 n / (2 ln 2) > 700).
bool walk_needs_log_domain(int n);

/// Terminal lambda_2 of the random walk for (seed, trial).
WalkOutcome walk(int n, std::uint64_t seed, std::uint64_t trial = 0);
/// Same path forced through LogReal.
WalkOutcome walk_log_domain(int n, std::uint64_t seed, std::uint64_t trial = 0);

struct WalkEnsemble {
  int n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double mean_lambda2 = 0.0;
  double stderr_lambda2 = 0.0;
  std::vector<double> samples;  // lambda_2 per trial, trial order
};

/// Independent walks for trials 0..trials-1 under OpenMP.
WalkEnsemble walk_ensemble(int n, std::size_t trials, std::uint64_t seed);
/// Serial reference; identical output.
WalkEnsemble walk_ensemble_reference(int n, std::size_t trials, std::uint64_t seed);

/// Samples of L-hat_n: each walk's terminal EXP(lambda_2) variate drawn
/// from the same trial stream.
std::vector<double> sample_lhat(int n, std::size_t trials, std::uint64_t seed);

}  // namespace kkldm
