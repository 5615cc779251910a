#include "kkldm/exact_recursion.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

namespace kkldm {

namespace {

using StateMap = std::map<RationalLambdaTuple, mpq_class>;

void check_size(int n, int max_n) {
  if (n < 2) throw ValidationError("enumeration needs n >= 2");
  if (n > max_n) throw ResourceLimitError("branch tree too large: n = " + std::to_string(n) + " exceeds cap " + std::to_string(max_n));
}

StateMap expand_level(const StateMap& level) {
  std::vector<std::pair<const RationalLambdaTuple*, const mpq_class*>> items;
  items.reserve(level.size());
  for (const auto& [tuple, prob] : level) items.emplace_back(&tuple, &prob);

  StateMap next;
  const auto count = static_cast<std::int64_t>(items.size());
#pragma omp parallel
  {
    StateMap local;
    RationalLambdaTuple child;
#pragma omp for schedule(dynamic, 8) nowait
    for (std::int64_t s = 0; s < count; ++s) {
      const auto& tuple = *items[static_cast<std::size_t>(s)].first;
      const auto& prob = *items[static_cast<std::size_t>(s)].second;
      const std::span<const mpq_class> view(tuple);
      for (std::size_t k = 1; k < tuple.size(); ++k) {
        transition_into(view, k, child);
        local[child] += prob * branch_probability(view, k);
      }
    }
#pragma omp critical(kkldm_merge_level)
    {
      for (auto& [tuple, prob] : local) next[tuple] += prob;
    }
  }
  return next;
}

void descend(const RationalLambdaTuple& tuple, const mpq_class& prob, ExpMixture& out) {
  if (tuple.size() == 2) {
    out.coeffs[tuple[1]] += prob;
    return;
  }
  const std::span<const mpq_class> view(tuple);
  for (std::size_t k = 1; k < tuple.size(); ++k) {
    descend(transition(view, k), prob * branch_probability(view, k), out);
  }
}

}  // namespace

mpq_class ExpMixture::total() const {
  mpq_class s = 0;
  for (const auto& [k, a] : coeffs) s += a;
  return s;
}

double ExpMixture::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  double s = 0.0;
  for (const auto& [k, a] : coeffs) s += a.get_d() * -std::expm1(-k.get_d() * x);
  return s;
}

ExpMixture enumerate_pdf(int n, int max_n) {
  check_size(n, max_n);
  StateMap level;
  level[RationalLambdaTuple(static_cast<std::size_t>(n), mpq_class(1))] = 1;
  for (int m = n; m > 2; --m) level = expand_level(level);

  ExpMixture mix;
  for (const auto& [tuple, prob] : level) mix.coeffs[tuple[1]] += prob;
  return mix;
}

ExpMixture enumerate_pdf_reference(int n, int max_n) {
  check_size(n, max_n);
  ExpMixture mix;
  descend(RationalLambdaTuple(static_cast<std::size_t>(n), mpq_class(1)), mpq_class(1), mix);
  return mix;
}

std::vector<std::size_t> enumeration_level_sizes(int n, int max_n) {
  check_size(n, max_n);
  StateMap level;
  level[RationalLambdaTuple(static_cast<std::size_t>(n), mpq_class(1))] = 1;
  std::vector<std::size_t> sizes{level.size()};
  for (int m = n; m > 2; --m) {
    level = expand_level(level);
    sizes.push_back(level.size());
  }
  return sizes;
}

mpq_class mixture_mean(const ExpMixture& mix) {
  mpq_class s = 0;
  for (const auto& [k, a] : mix.coeffs) s += a / k;
  return s;
}

mpq_class mean_uniform_discrepancy(const ExpMixture& mix, int n) { return mixture_mean(mix) / (n + 1); }

std::string to_fraction_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace kkldm
