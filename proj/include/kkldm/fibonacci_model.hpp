#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace kkldm {

// F(n) = F(n-1) + F(floor(n/2)), F(1) = 1  (OEIS A033485).

/// Default memory budget for the sliding window, in bytes.
inline constexpr std::size_t kFibonacciMemoryBudget = std::size_t{2} << 30;

/// Rough bytes needed to hold the window for F(n).
std::size_t fibonacci_window_bytes(std::uint64_t n);

/// Exact F(n) keeping only F(ceil(m/2))..F(m) while sweeping m up to n.
/// Throws ResourceLimitError naming the largest feasible n when the window
/// estimate exceeds `memory_budget`.
mpz_class fib_kk(std::uint64_t n, std::size_t memory_budget = kFibonacciMemoryBudget);

/// F(0..n_max), F(0) = 0. Full table; for tests and generating-function work.
std::vector<mpz_class> fib_table(std::uint64_t n_max);

/// F at each requested index (ascending or not) in one sliding-window sweep.
std::vector<mpz_class> fib_at(const std::vector<std::uint64_t>& points,
                              std::size_t memory_budget = kFibonacciMemoryBudget);

/// lambda_1^{n-1} from the boundary recursion
/// lambda_1^{t+1} = lambda_1^t + lambda_1^{2t-n+1}, lambda_1^t = 1 for t <= 0.
mpz_class boundary_unroll(std::uint64_t n);

/// Checks boundary_unroll(n) == F(n) for every n in [1, n_max] (OpenMP over n).
/// Returns the first failing n, or 0 if all agree.
std::uint64_t first_boundary_mismatch(std::uint64_t n_max);
/// Serial reference of the same sweep.
std::uint64_t first_boundary_mismatch_reference(std::uint64_t n_max);

struct GenfunReport {
  std::size_t order = 0;
  bool functional_equation_holds = false;  // g(z)(1-z) = z + (1+z) g(z^2)
  bool product_form_holds = false;         // g = ((1-z)^{-1} / prod_k (1 - z^{2^k}) - 1) / 2
  std::size_t first_mismatch = 0;          // coefficient index, 0 when none
  std::vector<mpz_class> coefficients;     // g_0..g_order from fib_table
};

inline constexpr std::size_t kGenfunMaxOrder = 4096;

GenfunReport genfun_check(std::size_t order);

/// Natural log of a positive big integer from its top 64 bits and bit length.
double ln_big(const mpz_class& value);

struct FibScalingPoint {
  std::uint64_t n = 0;
  double ln_f = 0.0;
  double scaled_value = 0.0;  // ln(F(n)(n+1)) / ln^2 n
};

/// One sweep over the requested n (each >= 3).
std::vector<FibScalingPoint> fib_scaling_curve(const std::vector<std::uint64_t>& points,
                                               std::size_t memory_budget = kFibonacciMemoryBudget);

}  // namespace kkldm
