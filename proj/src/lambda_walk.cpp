#include "kkldm/lambda_walk.hpp"

#include <limits>

#include "kkldm/errors.hpp"
#include "kkldm/stats.hpp"

namespace kkldm {

namespace {

void check_n(int n) {
  if (n < 2) throw ValidationError("walk needs n >= 2");
}

template <class T>
WalkOutcome run_walk(WalkState<T>& state) {
  while (!state.done()) state.step();
  WalkOutcome out;
  if constexpr (std::is_same_v<T, LogReal>) {
    out.ln_lambda2 = state.lambdas()[1].log();
    out.log_domain = true;
  } else {
    out.ln_lambda2 = std::log(state.lambdas()[1]);
  }
  out.lambda2 = out.ln_lambda2 > std::log(std::numeric_limits<double>::max())
                    ? std::numeric_limits<double>::infinity()
                    : std::exp(out.ln_lambda2);
  if constexpr (std::is_same_v<T, double>) out.lambda2 = state.lambdas()[1];
  return out;
}

WalkEnsemble finish(int n, std::size_t trials, std::uint64_t seed, std::vector<double> samples) {
  WalkEnsemble e;
  e.n = n;
  e.trials = trials;
  e.seed = seed;
  e.mean_lambda2 = sample_mean(samples);
  e.stderr_lambda2 = standard_error(samples);
  e.samples = std::move(samples);
  return e;
}

}  // namespace

bool walk_needs_log_domain(int n) {
  const double ln_n = std::log(static_cast<double>(n));
  return ln_n * ln_n / (2.0 * std::log(2.0)) > 700.0;
}

WalkOutcome walk(int n, std::uint64_t seed, std::uint64_t trial) {
  if (walk_needs_log_domain(n)) return walk_log_domain(n, seed, trial);
  check_n(n);
  WalkState<double> state(n, seed, trial);
  return run_walk(state);
}

WalkOutcome walk_log_domain(int n, std::uint64_t seed, std::uint64_t trial) {
  check_n(n);
  WalkState<LogReal> state(n, seed, trial);
  return run_walk(state);
}

WalkEnsemble walk_ensemble(int n, std::size_t trials, std::uint64_t seed) {
  check_n(n);
  if (trials < 1) throw ValidationError("trials must be at least 1");
  std::vector<double> samples(trials);
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t t = 0; t < count; ++t) {
    samples[static_cast<std::size_t>(t)] = walk(n, seed, static_cast<std::uint64_t>(t)).lambda2;
  }
  return finish(n, trials, seed, std::move(samples));
}

WalkEnsemble walk_ensemble_reference(int n, std::size_t trials, std::uint64_t seed) {
  check_n(n);
  if (trials < 1) throw ValidationError("trials must be at least 1");
  std::vector<double> samples(trials);
  for (std::size_t t = 0; t < trials; ++t) samples[t] = walk(n, seed, t).lambda2;
  return finish(n, trials, seed, std::move(samples));
}

std::vector<double> sample_lhat(int n, std::size_t trials, std::uint64_t seed) {
  check_n(n);
  std::vector<double> out(trials);
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t t = 0; t < count; ++t) {
    WalkState<double> state(n, seed, static_cast<std::uint64_t>(t));
    while (!state.done()) state.step();
    out[static_cast<std::size_t>(t)] = state.rng().exponential(state.lambdas()[1]);
  }
  return out;
}

}  // namespace kkldm
