#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kkldm/analysis_fit.hpp"
#include "kkldm/errors.hpp"

namespace kkldm {
namespace {

TEST(Constants, ClosedForms) {
  const double ln2 = std::log(2.0);
  EXPECT_NEAR(scaling_constant(), 0.7213475204, 1e-10);
  EXPECT_NEAR(fixed_coefficient_inv_ln(), (std::log(ln2) + 1) / ln2 + 1.5, 1e-15);
  EXPECT_NEAR(fixed_coefficient_inv_ln2(), (ln2 + 4 * std::log(ln2)) / 8 - std::pow(std::log(ln2), 2) / (2 * ln2),
              1e-15);
  const double l = 30.0;
  EXPECT_NEAR(fixed_scaling_terms(l),
              scaling_constant() + fixed_coefficient_inv_ln() / l + fixed_coefficient_inv_ln2() / (l * l), 1e-15);
}

TEST(ModelTags, RoundTrip) {
  for (auto tag : {ModelTag::simulation, ModelTag::rate, ModelTag::fibonacci, ModelTag::series}) {
    EXPECT_EQ(model_tag_from_string(to_string(tag)), tag);
  }
  EXPECT_THROW(model_tag_from_string("nope"), ValidationError);
}

TEST(ScaledValue, RawAndLogFormsAgree) {
  const auto a = ScalingPoint::from_raw(8.0, 18.0, ModelTag::fibonacci);
  const auto b = ScalingPoint::from_log(std::log(8.0), std::log(18.0), ModelTag::fibonacci);
  EXPECT_NEAR(scaled_value(a), std::log(162.0) / std::pow(std::log(8.0), 2), 1e-14);
  EXPECT_NEAR(scaled_value(a), scaled_value(b), 1e-14);
  EXPECT_THROW(scaled_value(ScalingPoint::from_raw(2.0, 1.0, ModelTag::rate)), ValidationError);
  const double huge = scaled_value(ScalingPoint::from_log(1e4, 5e7, ModelTag::series));
  EXPECT_NEAR(huge, (5e7 + 1e4) / 1e8, 1e-12);
}

std::vector<ScaledSample> synthetic(double c1, double c2, double c3, double noise, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> eps(0.0, noise);
  std::vector<ScaledSample> out;
  for (int k = 50; k <= 500; k += 25) {
    const double ln_n = k * std::log(2.0);
    out.push_back({ln_n, scaling_form(ln_n, c1, c2, c3) + (noise > 0 ? eps(gen) : 0.0)});
  }
  return out;
}

TEST(Fit, RecoversExactCoefficients) {
  const auto r = fit_loglog(synthetic(-1.44, -1.00, 0.72, 0.0, 1));
  EXPECT_NEAR(r.c1, -1.44, 1e-6);
  EXPECT_NEAR(r.c2, -1.00, 1e-4);
  EXPECT_NEAR(r.c3, 0.72, 1e-5);
  EXPECT_LT(r.residual_norm, 1e-10);
  EXPECT_EQ(r.points, 19u);
  EXPECT_GT(r.condition_number, 1.0);
}

TEST(Fit, ToleratesSmallNoise) {
  const auto r = fit_loglog(synthetic(-1.44, -1.00, 0.72, 1e-7, 2));
  EXPECT_NEAR(r.c1, -1.44, 0.02);
  EXPECT_NEAR(r.c3, 0.72, 0.02);
}

TEST(Fit, RejectsThinData) {
  auto few = synthetic(-1, -1, 1, 0.0, 3);
  few.resize(5);
  EXPECT_THROW(fit_loglog(few), ValidationError);
  std::vector<ScaledSample> narrow;
  for (int i = 0; i < 8; ++i) narrow.push_back({std::log(1000.0 + i), 0.7});
  EXPECT_THROW(fit_loglog(narrow), ValidationError);
}

TEST(NaiveFit, ExactPowerLaw) {
  std::vector<MeanSample> s;
  for (double n : {1e3, 3e3, 1e4, 3e4, 1e5}) {
    const double l = std::log(n);
    s.push_back({n, std::exp(-(0.3 + 0.65 * l * l))});
  }
  const auto f = naive_fit(s);
  EXPECT_NEAR(f.slope, 0.65, 1e-10);
  EXPECT_NEAR(f.intercept, 0.3, 1e-8);
  s.resize(2);
  EXPECT_THROW(naive_fit(s), ValidationError);
}

TEST(NaiveFit, LineFit) {
  const auto f = line_fit({1, 2, 3}, {3, 5, 7});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_THROW(line_fit({1}, {1}), ValidationError);
  EXPECT_THROW(line_fit({1, 2}, {1}), ValidationError);
}

}  // namespace
}  // namespace kkldm
