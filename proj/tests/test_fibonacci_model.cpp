#include <gtest/gtest.h>

#include <cmath>

#include "kkldm/errors.hpp"
#include "kkldm/fibonacci_model.hpp"

namespace kkldm {
namespace {

TEST(Fibonacci, LeadingTermsOfTheSequence) {
  const std::vector<unsigned long> known{1, 2, 3, 5, 7, 10, 13, 18, 23, 30, 37, 47, 57, 70, 83, 101, 119, 142, 165, 195,
                                         225, 262, 299, 346, 393, 450, 507, 577, 647, 730, 813, 914, 1015};
  const auto table = fib_table(known.size());
  EXPECT_EQ(table[0], 0);
  for (std::size_t i = 0; i < known.size(); ++i) EXPECT_EQ(table[i + 1], known[i]) << "n=" << i + 1;
}

TEST(Fibonacci, ValueAtEight) { EXPECT_EQ(fib_kk(8), 18); }

TEST(Fibonacci, SlidingWindowMatchesFullTable) {
  const auto table = fib_table(5000);
  for (std::uint64_t n : {1u, 2u, 3u, 4u, 63u, 64u, 65u, 1000u, 4097u, 5000u}) EXPECT_EQ(fib_kk(n), table[n]) << n;
  const auto at = fib_at({5000, 7, 2048, 7});
  EXPECT_EQ(at[0], table[5000]);
  EXPECT_EQ(at[1], table[7]);
  EXPECT_EQ(at[2], table[2048]);
  EXPECT_EQ(at[3], table[7]);
}

TEST(Fibonacci, BoundaryUnrollAgrees) {
  EXPECT_EQ(first_boundary_mismatch(2000), 0u);
  EXPECT_EQ(first_boundary_mismatch_reference(2000), 0u);
  EXPECT_EQ(boundary_unroll(8), 18);
}

TEST(Fibonacci, MemoryBudgetNamesTheFeasibleLimit) {
  try {
    fib_kk(1u << 20, 1u << 16);
    FAIL() << "expected ResourceLimitError";
  } catch (const ResourceLimitError& e) {
    EXPECT_NE(std::string(e.what()).find("largest feasible n"), std::string::npos) << e.what();
  }
  EXPECT_THROW(fib_kk(0), ValidationError);
}

TEST(GeneratingFunction, IdentitiesHold) {
  const auto r = genfun_check(1024);
  EXPECT_TRUE(r.functional_equation_holds);
  EXPECT_TRUE(r.product_form_holds);
  EXPECT_EQ(r.first_mismatch, 0u);
  EXPECT_EQ(r.coefficients.size(), 1025u);
  EXPECT_THROW(genfun_check(kGenfunMaxOrder + 1), ResourceLimitError);
}

TEST(LnBig, MatchesDoubleLog) {
  EXPECT_NEAR(ln_big(mpz_class(18)), std::log(18.0), 1e-15);
  mpz_class big = 1;
  big <<= 5000;
  EXPECT_NEAR(ln_big(big * 3), 5000 * std::log(2.0) + std::log(3.0), 1e-10);
}

TEST(ScalingCurve, ValueAtEightAndSlowDecline) {
  const auto pts = fib_scaling_curve({8, 1u << 10, 1u << 16, 1u << 20});
  EXPECT_NEAR(pts[0].scaled_value, std::log(18.0 * 9.0) / std::pow(std::log(8.0), 2), 1e-14);
  EXPECT_NEAR(pts[0].scaled_value, 1.17657, 1e-5);
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LT(pts[i].scaled_value, pts[i - 1].scaled_value);
  EXPECT_GT(pts.back().scaled_value, 0.6);
  EXPECT_LT(pts.back().scaled_value, 1.0 / (2.0 * std::log(2.0)));
  EXPECT_THROW(fib_scaling_curve({2}), ValidationError);
}

}  // namespace
}  // namespace kkldm
