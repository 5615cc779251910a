#include "kkldm/fibonacci_model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <string>

#include "kkldm/errors.hpp"

namespace kkldm {

namespace {

// ln F(n) stays below ln^2 n / (2 ln 2) + ln n + 1 over the computable range.
std::size_t limb_estimate(std::uint64_t n) {
  const double ln_n = std::log(static_cast<double>(std::max<std::uint64_t>(n, 2)));
  const double bits = (ln_n * ln_n / (2.0 * std::log(2.0)) + ln_n + 1.0) / std::log(2.0);
  return static_cast<std::size_t>(bits / 64.0) + 1;
}

// Sweeps m = 2..n_max and reports F(m) to `visit`, retaining only the window
// F(floor(m/2))..F(m-1) that the recursion still needs.
template <class Visit>
void sweep(std::uint64_t n_max, std::size_t memory_budget, Visit visit) {
  if (fibonacci_window_bytes(n_max) > memory_budget) {
    std::uint64_t lo = 1;
    std::uint64_t hi = n_max;
    while (lo + 1 < hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      (fibonacci_window_bytes(mid) <= memory_budget ? lo : hi) = mid;
    }
    throw ResourceLimitError("F(" + std::to_string(n_max) + ") exceeds the memory budget; largest feasible n is " +
                             std::to_string(lo));
  }
  std::deque<mpz_class> window{mpz_class(1)};  // F(1)
  std::uint64_t base = 1;                       // index of window.front()
  visit(std::uint64_t{1}, window.front());
  for (std::uint64_t m = 2; m <= n_max; ++m) {
    mpz_class next = window.back() + window[m / 2 - base];
    window.push_back(std::move(next));
    visit(m, window.back());
    // The next index m + 1 needs F(floor((m+1)/2)) onward.
    while (base < (m + 1) / 2) {
      window.pop_front();
      ++base;
    }
  }
}

}  // namespace

std::size_t fibonacci_window_bytes(std::uint64_t n) {
  return static_cast<std::size_t>(n / 2 + 1) * (sizeof(mpz_class) + 8 * limb_estimate(n) + 16);
}

mpz_class fib_kk(std::uint64_t n, std::size_t memory_budget) {
  if (n < 1) throw ValidationError("F(n) is defined for n >= 1");
  mpz_class out;
  sweep(n, memory_budget, [&](std::uint64_t m, const mpz_class& f) {
    if (m == n) out = f;
  });
  return out;
}

std::vector<mpz_class> fib_table(std::uint64_t n_max) {
  std::vector<mpz_class> f(n_max + 1);
  f[0] = 0;
  if (n_max >= 1) f[1] = 1;
  for (std::uint64_t m = 2; m <= n_max; ++m) f[m] = f[m - 1] + f[m / 2];
  return f;
}

std::vector<mpz_class> fib_at(const std::vector<std::uint64_t>& points, std::size_t memory_budget) {
  if (points.empty()) return {};
  std::map<std::uint64_t, mpz_class> wanted;
  for (auto p : points) {
    if (p < 1) throw ValidationError("F(n) is defined for n >= 1");
    wanted[p];
  }
  const std::uint64_t n_max = wanted.rbegin()->first;
  sweep(n_max, memory_budget, [&](std::uint64_t m, const mpz_class& f) {
    auto it = wanted.find(m);
    if (it != wanted.end()) it->second = f;
  });
  std::vector<mpz_class> out;
  out.reserve(points.size());
  for (auto p : points) out.push_back(wanted[p]);
  return out;
}

mpz_class boundary_unroll(std::uint64_t n) {
  if (n < 1) throw ValidationError("boundary recursion needs n >= 1");
  // lam[t] = lambda_1^t for t = 0..n-1; negative times read as 1.
  std::vector<mpz_class> lam(n);
  lam[0] = 1;
  const auto sn = static_cast<std::int64_t>(n);
  for (std::int64_t t = 0; t + 1 < sn; ++t) {
    const std::int64_t back = 2 * t - sn + 1;
    if (back <= 0) {
      lam[static_cast<std::size_t>(t + 1)] = lam[static_cast<std::size_t>(t)] + 1;
    } else {
      lam[static_cast<std::size_t>(t + 1)] = lam[static_cast<std::size_t>(t)] + lam[static_cast<std::size_t>(back)];
    }
  }
  return lam[n - 1];
}

std::uint64_t first_boundary_mismatch(std::uint64_t n_max) {
  const auto table = fib_table(n_max);
  constexpr std::uint64_t kNone = ~std::uint64_t{0};
  std::uint64_t first = kNone;
  const auto count = static_cast<std::int64_t>(n_max);
#pragma omp parallel for schedule(dynamic, 64) reduction(min : first)
  for (std::int64_t i = 1; i <= count; ++i) {
    const auto n = static_cast<std::uint64_t>(i);
    if (boundary_unroll(n) != table[n]) first = std::min(first, n);
  }
  return first == kNone ? 0 : first;
}

std::uint64_t first_boundary_mismatch_reference(std::uint64_t n_max) {
  const auto table = fib_table(n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (boundary_unroll(n) != table[n]) return n;
  }
  return 0;
}

GenfunReport genfun_check(std::size_t order) {
  if (order > kGenfunMaxOrder) {
    throw ResourceLimitError("generating-function order " + std::to_string(order) + " exceeds " +
                             std::to_string(kGenfunMaxOrder));
  }
  GenfunReport r;
  r.order = order;
  r.coefficients = fib_table(order);
  const auto& g = r.coefficients;
  auto g_of_z2 = [&](std::size_t m) -> mpz_class { return m % 2 == 0 ? g[m / 2] : mpz_class(0); };

  r.functional_equation_holds = true;
  for (std::size_t m = 0; m <= order; ++m) {
    const mpz_class lhs = g[m] - (m > 0 ? g[m - 1] : mpz_class(0));
    mpz_class rhs = (m == 1 ? 1 : 0) + g_of_z2(m);
    if (m > 0) rhs += g_of_z2(m - 1);
    if (lhs != rhs) {
      r.functional_equation_holds = false;
      if (r.first_mismatch == 0) r.first_mismatch = m;
    }
  }

  // Expand 1 / prod_k (1 - z^{2^k}) by repeated strided prefix sums, then
  // divide by (1 - z) with one more prefix sum.
  std::vector<mpz_class> series(order + 1, 0);
  series[0] = 1;
  for (std::size_t stride = 1; stride <= std::max<std::size_t>(order, 1); stride *= 2) {
    for (std::size_t m = stride; m <= order; ++m) series[m] += series[m - stride];
  }
  for (std::size_t m = 1; m <= order; ++m) series[m] += series[m - 1];
  r.product_form_holds = true;
  for (std::size_t m = 0; m <= order; ++m) {
    mpz_class twice = series[m] - (m == 0 ? 1 : 0);
    if (twice != 2 * g[m]) {
      r.product_form_holds = false;
      if (r.first_mismatch == 0) r.first_mismatch = m;
    }
  }
  return r;
}

double ln_big(const mpz_class& value) {
  if (sgn(value) <= 0) throw ValidationError("ln_big needs a positive value");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, value.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

std::vector<FibScalingPoint> fib_scaling_curve(const std::vector<std::uint64_t>& points, std::size_t memory_budget) {
  for (auto p : points) {
    if (p < 3) throw ValidationError("scaling curve needs n >= 3");
  }
  const auto values = fib_at(points, memory_budget);
  std::vector<FibScalingPoint> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    FibScalingPoint p;
    p.n = points[i];
    p.ln_f = ln_big(values[i]);
    const double ln_n = std::log(static_cast<double>(p.n));
    p.scaled_value = (p.ln_f + std::log1p(static_cast<double>(p.n))) / (ln_n * ln_n);
    out.push_back(p);
  }
  return out;
}

}  // namespace kkldm
