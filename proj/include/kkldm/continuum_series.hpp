#pragma once

#include <array>
#include <cstddef>
#include <functional>

#include <boost/multiprecision/mpfr.hpp>

namespace kkldm {

/// Arbitrary-precision real; precision is taken from the thread default at construction.
using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultSeriesPrecision = 256;

unsigned digits10_for_bits(unsigned bits);

/// Sets the default Real precision for its lifetime (process wide; not for concurrent use).
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

/// k ln 2 at the current precision.
Real ln_of_pow2(long k);

// ---------------------------------------------------------------------------
// Piecewise solution gamma(s) of gamma'(s) = n gamma(2s - 1), gamma = 1 on [-1, 0].
// Piece k covers [1 - 2^{1-k}, 1 - 2^{-k}] and equals
//   sum_{j<=k} n^j / (j! 2^{j(j-1)/2}) (2^{j-1} s - 2^{j-1} + 1)^j.

/// Piece index containing s (the lower one at a shared endpoint). Requires s in [-1, 1).
int gamma_piece(double s);

/// Closed form of piece k evaluated at s (no domain check).
double gamma_piece_eval(int k, double s, double n);

/// gamma(s) for s in [-1, 1); throws ValidationError outside.
double gamma_eval(double s, double n);

/// gamma_k(1 - 2^{-k}), evaluated without forming s (so large k stays exact in double).
double gamma_piece_end(int k, double n);

inline constexpr int kGammaCheckMaxK = 20;

/// Max relative residual between piece k+1 and
/// gamma_k(1 - 2^{-k}) + n * integral_{1-2^{-k}}^{s} gamma_k(2 xi - 1) d xi
/// over `samples` points of piece k+1, integrating by adaptive Simpson.
double gamma_recursion_check(int k, double n, int samples);

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

// ---------------------------------------------------------------------------
// f(n) = sum_j n^j / (j! 2^{j(j-1)/2}), in log domain.

struct LogBigValue {
  Real ln_value;
  unsigned precision_bits = kDefaultSeriesPrecision;
  std::size_t terms = 0;
};

/// ln f(n) by log-sum-exp over phi_j = j ln n - ln j! - j(j-1)/2 ln 2, stopping once
/// the tail is below 2^{-(precision_bits + 16)} of the largest term.
/// Throws ValidationError for ln_n < 0 or a precision that cannot carry ln f.
LogBigValue f_series(const Real& ln_n, unsigned precision_bits = kDefaultSeriesPrecision);

/// ln f(n) for a plain double n > 0 (convenience for moderate n).
Real ln_f_at(double n, unsigned precision_bits = kDefaultSeriesPrecision);

/// ln[f(n)(n+1)] / ln^2 n.
Real scaled_series_value(const LogBigValue& f, const Real& ln_n);

// ---------------------------------------------------------------------------
// Saddle point and asymptotic expansion.

struct SaddlePoint {
  double exact_root = 0.0;  // j with j 2^{j-1} = n
  double expansion = 0.0;   // four-term large-n expansion
  double difference = 0.0;  // exact_root - expansion
};

SaddlePoint saddle_point(double ln_n);

struct AsymptoticEval {
  Real ln_n;
  SaddlePoint saddle;
  std::array<Real, 6> terms;  // the six terms of the ln[f(n)(n+1)]/ln^2 n expansion
  Real expansion_value;       // their sum
  Real correction;            // log-polynomial correction C(n)
  Real ln_prefactor_form;     // ln[(2^{1/8} / sqrt(ln 2)) exp(ln^2 n / (2 ln 2) + C(n))]
};

/// Requires ln_n > 1.
AsymptoticEval asympt_expansion(const Real& ln_n);

/// 1 / (2 ln 2) at the current precision.
Real inv_two_ln2();

}  // namespace kkldm
