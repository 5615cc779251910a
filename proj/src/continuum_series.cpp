#include "kkldm/continuum_series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "kkldm/errors.hpp"

namespace kkldm {

unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(static_cast<double>(bits) * std::log10(2.0))) + 1;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(Real::default_precision()) {
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

Real ln_of_pow2(long k) { return Real(k) * log(Real(2)); }

Real inv_two_ln2() { return Real(1) / (2 * log(Real(2))); }

// ---------------------------------------------------------------------------

int gamma_piece(double s) {
  if (!(s >= -1.0 && s < 1.0)) throw ValidationError("gamma(s) is defined for s in [-1, 1)");
  int k = 0;
  while (s > 1.0 - std::ldexp(1.0, -k)) ++k;
  return k;
}

double gamma_piece_eval(int k, double s, double n) {
  double coeff = 1.0;  // n^j / (j! 2^{j(j-1)/2})
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) coeff *= n / (static_cast<double>(j) * std::ldexp(1.0, j - 1));
    const double base = 1.0 - std::ldexp(1.0 - s, j - 1);
    sum += coeff * std::pow(base, j);
  }
  return sum;
}

double gamma_eval(double s, double n) { return gamma_piece_eval(gamma_piece(s), s, n); }

double gamma_piece_end(int k, double n) {
  double coeff = 1.0;
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) coeff *= n / (static_cast<double>(j) * std::ldexp(1.0, j - 1));
    if (coeff == 0.0) break;
    sum += coeff * std::pow(1.0 - std::ldexp(1.0, j - 1 - k), j);
  }
  return sum;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

double gamma_recursion_check(int k, double n, int samples) {
  if (k < 0 || k > kGammaCheckMaxK) {
    throw ValidationError("gamma recursion check needs 0 <= k <= " + std::to_string(kGammaCheckMaxK));
  }
  if (samples < 1) throw ValidationError("gamma recursion check needs at least one sample");
  const double lo = 1.0 - std::ldexp(1.0, -k);
  const double hi = 1.0 - std::ldexp(1.0, -k - 1);
  const double start = gamma_eval(lo, n);
  const auto integrand = [&](double xi) { return gamma_eval(2.0 * xi - 1.0, n); };

  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s = samples == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (samples - 1);
    const double closed = gamma_piece_eval(k + 1, s, n);
    const double tol = 1e-13 * std::max(1.0, std::abs(closed));
    const double integrated = start + n * adaptive_simpson(integrand, lo, s, tol / std::max(1.0, n));
    worst = std::max(worst, std::abs(closed - integrated) / std::max(1.0, std::abs(closed)));
  }
  return worst;
}

// ---------------------------------------------------------------------------

LogBigValue f_series(const Real& ln_n, unsigned precision_bits) {
  if (precision_bits < 64) throw ValidationError("series precision must be at least 64 bits");
  if (ln_n < 0) throw ValidationError("f(n) series needs ln n >= 0");
  const double ln_n_d = ln_n.convert_to<double>();
  const double magnitude_bits = std::log2(ln_n_d * ln_n_d / (2.0 * std::log(2.0)) + 2.0);
  if (magnitude_bits > static_cast<double>(precision_bits) - 64.0) {
    throw ValidationError("precision of " + std::to_string(precision_bits) + " bits is too low for ln n = " +
                          std::to_string(ln_n_d));
  }

  PrecisionScope scope(precision_bits);
  const Real ln2 = log(Real(2));
  const Real ln_n_p(ln_n);
  const Real cutoff = Real(precision_bits + 16) * ln2;

  std::vector<Real> phi{Real(0)};
  Real best = 0;
  Real current = 0;
  for (std::uint64_t j = 1;; ++j) {
    const Real increment = ln_n_p - log(Real(j)) - Real(j - 1) * ln2;
    current += increment;
    phi.push_back(current);
    if (current > best) best = current;
    if (increment < 0 && current < best - cutoff) break;
  }
  Real sum = 0;
  for (const auto& p : phi) sum += exp(p - best);

  LogBigValue out;
  out.ln_value = best + log(sum);
  out.precision_bits = precision_bits;
  out.terms = phi.size();
  return out;
}

Real ln_f_at(double n, unsigned precision_bits) {
  if (!(n > 0.0)) throw ValidationError("ln_f_at needs n > 0");
  PrecisionScope scope(precision_bits);
  if (n < 1.0) {
    // ln n < 0: sum the series directly.
    Real x(n);
    Real term = 1;
    Real sum = 1;
    for (unsigned j = 1; j < 400; ++j) {
      term *= x / (Real(j) * pow(Real(2), j - 1));
      sum += term;
    }
    return log(sum);
  }
  return f_series(log(Real(n)), precision_bits).ln_value;
}

Real scaled_series_value(const LogBigValue& f, const Real& ln_n) {
  PrecisionScope scope(f.precision_bits);
  const Real ln_n_p(ln_n);
  const Real ln_n_plus_1 = ln_n_p + log(Real(1) + exp(-ln_n_p));
  return (f.ln_value + ln_n_plus_1) / (ln_n_p * ln_n_p);
}

// ---------------------------------------------------------------------------

SaddlePoint saddle_point(double ln_n) {
  if (!(ln_n > 0.0)) throw ValidationError("saddle point needs ln n > 0");
  const double ln2 = std::log(2.0);
  const auto g = [&](double j) { return std::log(j) + (j - 1.0) * ln2 - ln_n; };
  double lo = 1e-6;
  double hi = std::max(2.0, ln_n / ln2 + 2.0);
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(
      g, lo, hi, [](double a, double b) { return std::abs(b - a) <= 1e-14 * std::max(1.0, std::abs(a)); }, iters);

  SaddlePoint sp;
  sp.exact_root = 0.5 * (root.first + root.second);
  const double x = ln_n / ln2;
  const double lx = std::log(x);
  sp.expansion = x - lx / ln2 + 1.0 + lx / (ln2 * ln_n) - 1.0 / ln_n;
  sp.difference = sp.exact_root - sp.expansion;
  return sp;
}

AsymptoticEval asympt_expansion(const Real& ln_n) {
  if (!(ln_n > 1)) throw ValidationError("asymptotic expansion needs ln n > 1");
  const Real L(ln_n);
  const Real ln2 = log(Real(2));
  const Real lnln2 = log(ln2);
  const Real ll = log(L);

  AsymptoticEval e;
  e.ln_n = L;
  e.saddle = saddle_point(L.convert_to<double>());
  e.terms[0] = 1 / (2 * ln2);
  e.terms[1] = ((lnln2 + 1) / ln2 + Real(3) / 2) / L;
  e.terms[2] = ((ln2 + 4 * lnln2) / 8 - lnln2 * lnln2 / (2 * ln2)) / (L * L);
  e.terms[3] = -(ll / L) / ln2;
  e.terms[4] = -ll / (L * L);
  e.terms[5] = ll * ll / (L * L) / (2 * ln2);
  e.expansion_value = 0;
  for (const auto& t : e.terms) e.expansion_value += t;

  const Real lx = log(L / ln2);
  e.correction = -(L / ln2) * (lx - 1 - ln2 / 2) + (lx * lx / (2 * ln2) - lx);
  e.ln_prefactor_form = ln2 / 8 - log(ln2) / 2 + L * L / (2 * ln2) + e.correction;
  return e;
}

}  // namespace kkldm
