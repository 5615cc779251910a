#include <gtest/gtest.h>

#include <cmath>

#include "kkldm/continuum_series.hpp"
#include "kkldm/errors.hpp"

namespace kkldm {
namespace {

double direct_f(double n) {
  double sum = 0.0;
  double term = 1.0;
  for (int j = 0; j < 60; ++j) {
    sum += term;
    term *= n / ((j + 1) * std::ldexp(1.0, j));
  }
  return sum;
}

double ln_f(double n) { return static_cast<double>(ln_f_at(n)); }

TEST(Series, DirectSumAtOne) {
  EXPECT_NEAR(std::exp(ln_f(1.0)), direct_f(1.0), 1e-12);
  EXPECT_NEAR(std::exp(ln_f(1.0)), 2.2714925555, 1e-10);
}

TEST(Series, DirectSumAtModerateN) {
  for (double n : {0.25, 3.0, 20.0, 100.0}) EXPECT_NEAR(ln_f(n), std::log(direct_f(n)), 1e-12) << n;
}

TEST(Series, DerivativeIsTheHalfArgumentValue) {
  for (double n : {2.0, 10.0, 300.0, 1e5}) {
    const double h = 1e-4 * n;
    const double d = (std::exp(ln_f(n + h) - ln_f(n)) - std::exp(ln_f(n - h) - ln_f(n))) / (2 * h);
    const double target = std::exp(ln_f(n / 2) - ln_f(n));
    EXPECT_NEAR(d / target, 1.0, 1e-4) << n;
  }
}

TEST(Series, HugeArgumentInLogForm) {
  PrecisionScope scope(256);
  const Real ln_n = ln_of_pow2(500);
  const auto f = f_series(ln_n, 256);
  EXPECT_GT(f.terms, 100u);
  EXPECT_LT(f.terms, 2000u);
  const double scaled = static_cast<double>(scaled_series_value(f, ln_n));
  EXPECT_GT(scaled, 0.69);
  EXPECT_LT(scaled, 0.7213475);
}

TEST(Series, InputValidation) {
  PrecisionScope scope(256);
  EXPECT_THROW(f_series(Real(-1), 256), ValidationError);
  EXPECT_THROW(f_series(Real(10), 32), ValidationError);
  EXPECT_THROW(f_series(ln_of_pow2(1L << 40), 128), ValidationError);
}

TEST(Asymptotics, ResidualShrinksAlongTheLadder) {
  PrecisionScope scope(256);
  double prev = INFINITY;
  for (int m = 1; m <= 8; ++m) {
    const Real ln_n = ln_of_pow2(50L * m);
    const auto f = f_series(ln_n, 256);
    const auto a = asympt_expansion(ln_n);
    const double residual = std::abs(static_cast<double>(scaled_series_value(f, ln_n) - a.expansion_value));
    EXPECT_LT(residual, prev) << "m=" << m;
    if (m == 4) EXPECT_LT(residual, 1e-2);
    prev = residual;
  }
}

TEST(Asymptotics, PrefactorFormTracksTheSeries) {
  PrecisionScope scope(256);
  const Real ln_n = ln_of_pow2(200);
  const auto f = f_series(ln_n, 256);
  const auto a = asympt_expansion(ln_n);
  const double rel = std::abs(static_cast<double>((a.ln_prefactor_form - f.ln_value) / f.ln_value));
  EXPECT_LT(rel, 1e-4);
  Real sum = 0;
  for (const auto& t : a.terms) sum += t;
  EXPECT_EQ(sum, a.expansion_value);
  EXPECT_THROW(asympt_expansion(Real(0.5)), ValidationError);
}

TEST(Saddle, RootSolvesTheCondition) {
  for (double log2_n : {1.0, 10.0, 100.0, 400.0}) {
    const double ln_n = log2_n * std::log(2.0);
    const auto s = saddle_point(ln_n);
    const double j = s.exact_root;
    EXPECT_NEAR(std::log(j) + (j - 1) * std::log(2.0), ln_n, 1e-10 * ln_n);
  }
  EXPECT_NEAR(saddle_point(std::log(2.0)).exact_root, 1.4569995, 1e-6);
}

TEST(Saddle, ExpansionImprovesWithN) {
  double prev = INFINITY;
  for (double log2_n : {10.0, 25.0, 50.0, 100.0, 200.0, 400.0}) {
    const auto s = saddle_point(log2_n * std::log(2.0));
    EXPECT_DOUBLE_EQ(s.difference, s.exact_root - s.expansion);
    EXPECT_LT(std::abs(s.difference), prev) << log2_n;
    prev = std::abs(s.difference);
  }
  EXPECT_LT(std::abs(saddle_point(100 * std::log(2.0)).difference), 0.05);
}

TEST(Gamma, PieceIndex) {
  EXPECT_EQ(gamma_piece(-1.0), 0);
  EXPECT_EQ(gamma_piece(0.0), 0);
  EXPECT_EQ(gamma_piece(0.25), 1);
  EXPECT_EQ(gamma_piece(0.5), 1);
  EXPECT_EQ(gamma_piece(0.6), 2);
  EXPECT_EQ(gamma_piece(0.75), 2);
  EXPECT_EQ(gamma_piece(0.8), 3);
  EXPECT_THROW(gamma_piece(1.0), ValidationError);
  EXPECT_THROW(gamma_piece(-1.5), ValidationError);
}

TEST(Gamma, LowPiecesInClosedForm) {
  const double n = 3.0;
  EXPECT_EQ(gamma_eval(-0.4, n), 1.0);
  EXPECT_NEAR(gamma_eval(0.3, n), 1.0 + n * 0.3, 1e-14);
  const double s = 0.6;
  EXPECT_NEAR(gamma_eval(s, n), 1 + n * s + n * n / 4 * std::pow(2 * s - 1, 2), 1e-13);
}

TEST(Gamma, PiecesJoinContinuously) {
  for (double n : {0.5, 4.0, 50.0}) {
    for (int k = 1; k < 12; ++k) {
      const double end = 1.0 - std::ldexp(1.0, -k);
      const double a = gamma_piece_eval(k, end, n);
      EXPECT_NEAR(gamma_piece_eval(k + 1, end, n), a, 1e-12 * a);
      EXPECT_NEAR(gamma_piece_end(k, n), a, 1e-11 * a);
    }
  }
}

TEST(Gamma, IntegralRecursionHolds) {
  for (int k = 0; k <= 6; ++k) EXPECT_LT(gamma_recursion_check(k, 5.0, 16), 1e-9) << k;
  EXPECT_THROW(gamma_recursion_check(kGammaCheckMaxK + 1, 5.0, 4), ValidationError);
}

TEST(Gamma, EndpointValuesConvergeToTheSeries) {
  for (double n : {1.0, 7.0, 40.0}) EXPECT_NEAR(gamma_piece_end(40, n) / direct_f(n), 1.0, 1e-10) << n;
}

TEST(Quadrature, AdaptiveSimpson) {
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12), std::exp(1.0) - 1, 1e-11);
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10), 2.0 / 3.0, 1e-8);
}

}  // namespace
}  // namespace kkldm
