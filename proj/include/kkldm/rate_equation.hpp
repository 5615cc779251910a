#pragma once

#include <cstddef>
#include <vector>

namespace kkldm {

// Mean-field evolution of the average lambda tuple. Indices follow the
// 1-based convention of the recursion: lambdas[i - 1] holds lambda_i^t for
// i = 1..n-t.

/// P_i^t = prod_{j<i} l_j / (l_j + l_{n-t}) for i = 1..m-1, m = n - t.
/// Entry i - 1 holds P_i.
using ProbProfile = std::vector<double>;

struct RateState {
  int n = 0;
  int t = 0;
  std::vector<double> lambdas;

  /// All-ones start, t = 0.
  static RateState initial(int n);
};

ProbProfile probability_profile(const RateState& state);

/// One iteration: length n - t -> n - t - 1. Requires length >= 2.
RateState step(const RateState& state);

/// Largest n for which lambda values stay inside double range (ln^2 n / (2 ln 2) <= 700).
bool rate_equation_in_double_range(int n);

/// lambda_1^{n-1}. O(n) memory; the step loop stops at the first
/// P_i below 1e-300 and shifts the remainder in place.
double solve(int n);

/// Largest n accepted by solve (2n + 1 doubles of working memory).
inline constexpr int kRateEquationMaxN = 1 << 27;

/// Plain repeated step() from the all-ones state; O(n^2) with no early exit.
double solve_reference(int n);

inline constexpr int kContourFieldCap = 4096;

/// ln lambda_i^t over the triangle 0 <= t <= n-1, 1 <= i <= n-t.
/// field[t][i - 1] = ln lambda_i^t. Throws ResourceLimitError above kContourFieldCap.
std::vector<std::vector<double>> contour_field(int n, int cap = kContourFieldCap);

/// Fraction of grid points (i > 1, 1 <= x <= t, away from the dyadic fronts
/// t = n/2, 3n/4, 7n/8 by more than `front_margin`) whose diagonal deviation
/// |l_i^t - l_{i-x}^{t-x}| / l_i^t with x = 1 is below `tolerance`.
double diagonal_similarity_fraction(const std::vector<std::vector<double>>& field, double tolerance,
                                    int front_margin);

}  // namespace kkldm
