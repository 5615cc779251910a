#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "kkldm/errors.hpp"

namespace kkldm {

// A lambda tuple (l_1, ..., l_m) stands for the partial sums X_1, X_1 + X_2, ...
// of independent exponentials X_i ~ EXP(l_i). One differencing step removes the
// two largest numbers and inserts their difference X_m; `k` (1-based, 1 <= k <= m-1)
// is the position the difference takes in the shortened list.

namespace detail {
inline void check_branch(std::size_t m, std::size_t k) {
  if (m < 2) throw ValidationError("lambda tuple needs at least two entries");
  if (k < 1 || k > m - 1) {
    throw ValidationError("branch index " + std::to_string(k) + " outside [1, " + std::to_string(m - 1) + "]");
  }
}
}  // namespace detail

/// Probability that the difference lands at position k.
template <class T>
T branch_probability(std::span<const T> lambdas, std::size_t k) {
  const std::size_t m = lambdas.size();
  detail::check_branch(m, k);
  const T& last = lambdas[m - 1];
  T p(1);
  for (std::size_t i = 0; i + 1 < k; ++i) p = p * (lambdas[i] / (lambdas[i] + last));
  if (k <= m - 2) p = p * (last / (lambdas[k - 1] + last));
  return p;
}

/// Tuple conditioned on branch k, written into `out` (length m - 1).
template <class T>
void transition_into(std::span<const T> lambdas, std::size_t k, std::vector<T>& out) {
  const std::size_t m = lambdas.size();
  detail::check_branch(m, k);
  const T& last = lambdas[m - 1];
  out.clear();
  if (k <= m - 2) {
    for (std::size_t i = 0; i < k; ++i) out.push_back(lambdas[i] + last);
    for (std::size_t i = k - 1; i + 2 < m; ++i) out.push_back(lambdas[i]);
  } else {
    for (std::size_t i = 0; i + 2 < m; ++i) out.push_back(lambdas[i] + last);
    out.push_back(last);
  }
}

template <class T>
std::vector<T> transition(std::span<const T> lambdas, std::size_t k) {
  std::vector<T> out;
  out.reserve(lambdas.size());
  transition_into(lambdas, k, out);
  return out;
}

using RationalLambdaTuple = std::vector<mpq_class>;

/// p(x) = sum_k a_k * k * exp(-k x): a_k is the probability that the final
/// difference is an EXP(k) variate.
struct ExpMixture {
  std::map<mpq_class, mpq_class> coeffs;

  mpq_class total() const;
  double cdf(double x) const;
};

inline constexpr int kDefaultEnumerationCap = 12;

/// Exact mixture for LDM on n unit-parameter exponentials, by exploring the
/// whole branch tree level by level and merging identical tuples. Levels are
/// expanded under OpenMP; the result does not depend on the thread count.
/// Throws ResourceLimitError("branch tree too large") for n > max_n.
ExpMixture enumerate_pdf(int n, int max_n = kDefaultEnumerationCap);

/// Serial depth-first reference without state merging.
ExpMixture enumerate_pdf_reference(int n, int max_n = kDefaultEnumerationCap);

/// Number of distinct merged tuples per level, from length n down to 2.
std::vector<std::size_t> enumeration_level_sizes(int n, int max_n = kDefaultEnumerationCap);

/// E[L-hat_n] = sum_k a_k / k.
mpq_class mixture_mean(const ExpMixture& mix);

/// E[L_n] for uniform inputs: mixture_mean / (n + 1).
mpq_class mean_uniform_discrepancy(const ExpMixture& mix, int n);

/// "p/q" (or "p" when q == 1).
std::string to_fraction_string(const mpq_class& q);

}  // namespace kkldm
