#include "kkldm/rate_equation.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "kkldm/errors.hpp"

namespace kkldm {

namespace {

constexpr double kNegligibleProbability = 1e-300;

void check_n(int n) {
  if (n < 2) throw ValidationError("rate equation needs n >= 2");
  if (!rate_equation_in_double_range(n)) {
    throw ResourceLimitError("n = " + std::to_string(n) +
                             " leaves double range for lambda values; a log-domain solver is required");
  }
  if (n > kRateEquationMaxN) {
    throw ResourceLimitError("n = " + std::to_string(n) + " exceeds the solver limit " +
                             std::to_string(kRateEquationMaxN));
  }
}

}  // namespace

RateState RateState::initial(int n) {
  RateState s;
  s.n = n;
  s.t = 0;
  s.lambdas.assign(static_cast<std::size_t>(n), 1.0);
  return s;
}

ProbProfile probability_profile(const RateState& state) {
  const std::size_t m = state.lambdas.size();
  ProbProfile p(m > 0 ? m - 1 : 0);
  const double last = state.lambdas[m - 1];
  double run = 1.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    p[i] = run;
    run *= state.lambdas[i] / (state.lambdas[i] + last);
  }
  return p;
}

RateState step(const RateState& state) {
  const std::size_t m = state.lambdas.size();
  if (m < 2) throw ValidationError("rate equation step needs at least two entries");
  const auto& l = state.lambdas;
  const ProbProfile p = probability_profile(state);
  const double last = l[m - 1];

  RateState next;
  next.n = state.n;
  next.t = state.t + 1;
  next.lambdas.resize(m - 1);
  // 0-based: next[i] is lambda_{i+1}^{t+1}.
  for (std::size_t i = 0; i + 2 < m; ++i) {
    const double copy = i > 0 ? l[i - 1] : 0.0;
    next.lambdas[i] = copy * (1.0 - p[i]) + (l[i] + last) * p[i];
  }
  const std::size_t b = m - 2;
  const double copy = b > 0 ? l[b - 1] : 0.0;
  next.lambdas[b] = copy * (1.0 - p[b]) + last * p[b];
  return next;
}

bool rate_equation_in_double_range(int n) {
  const double ln_n = std::log(static_cast<double>(n));
  return ln_n * ln_n / (2.0 * std::log(2.0)) <= 700.0;
}

double solve(int n) {
  check_n(n);
  // lambda_i^t lives at buf[offset + i]. Where P_i vanishes the update is a
  // pure copy lambda_i^{t+1} = lambda_{i-1}^t, which the offset shift
  // performs for free.
  std::vector<double> buf(2 * static_cast<std::size_t>(n) + 1, 1.0);
  std::size_t offset = static_cast<std::size_t>(n);
  for (int t = 0; t < n - 1; ++t) {
    const std::size_t m = static_cast<std::size_t>(n - t);
    const double last = buf[offset + m];
    double p = 1.0;
    for (std::size_t i = 1; i < m; ++i) {
      if (p < kNegligibleProbability) break;
      const double li = buf[offset + i];
      const double prev = buf[offset + i - 1];
      const double grown = i + 1 < m ? li + last : last;
      buf[offset + i - 1] = prev * (1.0 - p) + grown * p;
      p *= li / (li + last);
    }
    --offset;
  }
  return buf[offset + 1];
}

double solve_reference(int n) {
  check_n(n);
  RateState s = RateState::initial(n);
  while (s.lambdas.size() > 1) s = step(s);
  return s.lambdas.front();
}

std::vector<std::vector<double>> contour_field(int n, int cap) {
  check_n(n);
  if (n > cap) {
    throw ResourceLimitError("contour field for n = " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
  std::vector<std::vector<double>> field;
  field.reserve(static_cast<std::size_t>(n));
  RateState s = RateState::initial(n);
  for (;;) {
    std::vector<double> row(s.lambdas.size());
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = std::log(s.lambdas[i]);
    field.push_back(std::move(row));
    if (s.lambdas.size() == 1) break;
    s = step(s);
  }
  return field;
}

double diagonal_similarity_fraction(const std::vector<std::vector<double>>& field, double tolerance,
                                    int front_margin) {
  const int n = static_cast<int>(field.size());
  auto near_front = [&](int t) {
    for (int k = 1; k <= 3; ++k) {
      const int front = n - (n >> k);
      if (std::abs(t - front) <= front_margin) return true;
    }
    return false;
  };
  std::size_t total = 0;
  std::size_t good = 0;
  for (int t = 1; t < n; ++t) {
    if (near_front(t)) continue;
    const auto& row = field[static_cast<std::size_t>(t)];
    const auto& prev = field[static_cast<std::size_t>(t - 1)];
    for (std::size_t i = 1; i < row.size(); ++i) {
      // row[i] = ln lambda_{i+1}^t, prev[i-1] = ln lambda_i^{t-1}
      const double dev = std::abs(1.0 - std::exp(prev[i - 1] - row[i]));
      ++total;
      if (dev < tolerance) ++good;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(good) / static_cast<double>(total);
}

}  // namespace kkldm
