#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kkldm/errors.hpp"
#include "kkldm/stats.hpp"

namespace kkldm {
namespace {

TEST(Moments, MeanAndStandardError) {
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(sample_mean(x), 2.5);
  EXPECT_NEAR(standard_error(x), std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
}

TEST(Histogram, UnitMeanNormalization) {
  std::mt19937_64 gen(1);
  std::exponential_distribution<double> e(3.0);
  std::vector<double> x(20000);
  for (auto& v : x) v = e(gen);
  const auto h = unit_mean_histogram(x, 40);
  ASSERT_EQ(h.center.size(), 40u);
  double mass = 0.0;
  for (double d : h.density) mass += d * h.bin_width;
  EXPECT_NEAR(mass, 1.0, 1e-12);
  EXPECT_NEAR(h.center[0], h.bin_width / 2, 1e-15);
  EXPECT_NEAR(h.density[0], -std::expm1(-h.bin_width) / h.bin_width, 0.03);
}

TEST(Ks, TwoSampleDistance) {
  EXPECT_DOUBLE_EQ(ks_distance(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(ks_distance(std::vector<double>{1, 2}, std::vector<double>{3, 4}), 1.0);
  EXPECT_DOUBLE_EQ(ks_distance(std::vector<double>{1, 3}, std::vector<double>{2, 4}), 0.5);
}

TEST(Ks, OneSampleAgainstTheTrueCdf) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(5000);
  for (auto& v : x) v = u(gen);
  const double d = ks_statistic(x, [](double t) { return std::clamp(t, 0.0, 1.0); });
  EXPECT_LT(d, 0.03);
  EXPECT_GT(ks_p_value(d, 5000), 0.01);
  const double skew = ks_statistic(x, [](double t) { return std::clamp(t * t, 0.0, 1.0); });
  EXPECT_LT(ks_p_value(skew, 5000), 1e-6);
}

TEST(Ks, PValueLimits) {
  EXPECT_NEAR(ks_p_value(0.0, 100), 1.0, 1e-12);
  EXPECT_LT(ks_p_value(1.0, 100), 1e-12);
  // Kolmogorov tail at lambda = 1.36 is about 0.05.
  EXPECT_NEAR(ks_p_value(1.36 / std::sqrt(1e6), 1e6), 0.049, 0.003);
}

TEST(ChiSquare, UniformDie) {
  const std::vector<std::size_t> fair{100, 98, 103, 99, 101, 99};
  const std::vector<double> p(6, 1.0 / 6.0);
  const auto ok = chi_square_gof(fair, p);
  EXPECT_GT(ok.p_value, 0.9);
  const std::vector<std::size_t> loaded{200, 80, 80, 80, 80, 80};
  EXPECT_LT(chi_square_gof(loaded, p).p_value, 1e-10);
  EXPECT_THROW(chi_square_gof(fair, std::vector<double>(5, 0.2)), ValidationError);
}

}  // namespace
}  // namespace kkldm
