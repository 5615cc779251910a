#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "kkldm/core_ldm.hpp"
#include "kkldm/errors.hpp"

namespace kkldm {
namespace {

std::multiset<unsigned long> side(const Instance& inst, const Partition& p, bool a) {
  std::multiset<unsigned long> out;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (p.in_a[i] == a) out.insert(inst[i].get_ui());
  }
  return out;
}

// Random instance generator for property checks: n in [1, max_n], width in [1, max_bits].
Instance random_small_instance(std::mt19937_64& gen, std::size_t max_n, unsigned max_bits) {
  std::uniform_int_distribution<std::size_t> n_dist(1, max_n);
  std::uniform_int_distribution<unsigned> b_dist(1, max_bits);
  const std::size_t n = n_dist(gen);
  const unsigned bits = b_dist(gen);
  std::vector<mpz_class> values(n);
  gmp_randclass r(gmp_randinit_default);
  r.seed(static_cast<unsigned long>(gen()));
  for (auto& v : values) v = r.get_z_bits(bits);
  return Instance(std::move(values), bits);
}

TEST(Ldm, WorkedExampleFromTheDifferencingTree) {
  const auto inst = Instance::of({4, 5, 6, 7, 8});
  const auto p = ldm(inst);
  EXPECT_EQ(p.discrepancy, 2);
  const auto a = side(inst, p, true);
  const auto b = side(inst, p, false);
  const std::multiset<unsigned long> s457{4, 5, 7};
  const std::multiset<unsigned long> s68{6, 8};
  EXPECT_TRUE((a == s457 && b == s68) || (a == s68 && b == s457));
}

TEST(Ldm, ForestSpansAllNodesAfterNMinusOneJoins) {
  const auto inst = Instance::of({4, 5, 6, 7, 8});
  const auto f = ldm_forest(inst);
  EXPECT_EQ(f.edges.size(), 4u);
  EXPECT_EQ(f.root_count(), 1u);
  EXPECT_EQ(f.label[f.find_root(0)], 2);
}

TEST(Ldm, EqualPairAndSingleton) {
  EXPECT_EQ(ldm(Instance::of({9, 9})).discrepancy, 0);
  const auto single = ldm(Instance::of({13}));
  EXPECT_EQ(single.discrepancy, 13);
  ASSERT_EQ(single.in_a.size(), 1u);
  EXPECT_TRUE(single.in_a[0]);
}

TEST(Ldm, ZerosAreCarriedAndHarmless) {
  EXPECT_EQ(ldm(Instance::of({0, 0, 5, 3}, 4)).discrepancy, 2);
  EXPECT_EQ(ldm(Instance::of({0, 0, 0}, 1)).discrepancy, 0);
}

TEST(Ldm, EmptyInstanceIsRejected) {
  try {
    Instance(std::vector<mpz_class>{}, 8);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "empty instance");
  }
}

TEST(Ldm, ValuesMustFitTheBitWidth) {
  EXPECT_THROW(Instance::of({16}, 4), ValidationError);
  EXPECT_NO_THROW(Instance::of({15}, 4));
}

TEST(Pdm, HandTracedExamples) {
  EXPECT_EQ(pdm(Instance::of({4, 5, 6, 7, 8})), 2);
  EXPECT_EQ(pdm(Instance::of({7, 7})), 0);
  EXPECT_EQ(pdm(Instance::of({11})), 11);
}

TEST(BruteForce, Examples) {
  const auto inst = Instance::of({4, 5, 6, 7, 8});
  const auto p = brute_force_optimum(inst);
  EXPECT_EQ(p.discrepancy, 0);
  const auto a = side(inst, p, true);
  const std::multiset<unsigned long> s456{4, 5, 6};
  const std::multiset<unsigned long> s78{7, 8};
  EXPECT_TRUE(a == s456 || a == s78);
  EXPECT_EQ(brute_force_optimum(Instance::of({1, 2})).discrepancy, 1);
  EXPECT_EQ(brute_force_optimum(Instance::of({1, 2, 3})).discrepancy, 0);
}

TEST(BruteForce, RejectsLargeInstances) {
  std::vector<mpz_class> v(31, mpz_class(1));
  EXPECT_THROW(brute_force_optimum(Instance(v, 1)), ResourceLimitError);
}

TEST(BruteForce, WideValuesUseTheBigIntegerPath) {
  // 200-bit values: {2^199, 2^198, 2^198} splits perfectly.
  mpz_class big = 1;
  big <<= 199;
  mpz_class half = big / 2;
  const Instance inst({big, half, half}, 200);
  EXPECT_EQ(brute_force_optimum(inst).discrepancy, 0);
  EXPECT_EQ(ldm(inst).discrepancy, 0);
}

TEST(LdmProperties, PartitionConsistency) {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 300; ++rep) {
    const auto inst = random_small_instance(gen, 60, 200);
    const auto p = ldm(inst);
    EXPECT_EQ(discrepancy_of(inst, p.in_a), p.discrepancy);
  }
}

TEST(LdmProperties, ScaleEquivariance) {
  std::mt19937_64 gen(12);
  for (int rep = 0; rep < 200; ++rep) {
    const auto inst = random_small_instance(gen, 40, 60);
    const unsigned long c = 1 + gen() % 1000;
    std::vector<mpz_class> scaled;
    for (const auto& v : inst.values()) scaled.push_back(v * c);
    const Instance big(scaled, inst.bits() + 10);
    EXPECT_EQ(ldm(big).discrepancy, c * ldm(inst).discrepancy);
  }
}

TEST(LdmProperties, NeverBeatsTheOptimum) {
  std::mt19937_64 gen(13);
  for (int rep = 0; rep < 120; ++rep) {
    const auto inst = random_small_instance(gen, 16, 40);
    const auto opt = brute_force_optimum(inst);
    EXPECT_EQ(discrepancy_of(inst, opt.in_a), opt.discrepancy);
    EXPECT_GE(ldm(inst).discrepancy, opt.discrepancy);
    EXPECT_GE(pdm(inst), opt.discrepancy);
  }
}

TEST(DefaultBits, PolicyFormula) {
  EXPECT_EQ(default_bits(1), 64u);
  for (std::size_t n : {2u, 20u, 1000u, 10000u, 100000u}) {
    const double l = std::log(static_cast<double>(n));
    const unsigned expected =
        std::max(64u, static_cast<unsigned>(std::ceil(3 * l * l / (2 * std::log(2.0)) / std::log(2.0))) + 64u);
    EXPECT_EQ(default_bits(n), expected) << n;
  }
  EXPECT_EQ(default_bits(10000), 329u);
}

TEST(Simulation, RandomInstancesRespectTheBitWidth) {
  const SimConfig c{50, 70, 3, 5};
  const auto inst = random_instance(c, 2);
  EXPECT_EQ(inst.size(), 50u);
  EXPECT_EQ(inst.bits(), 70u);
  bool high_bit_seen = false;
  for (const auto& v : inst.values()) {
    EXPECT_LE(mpz_sizeinbase(v.get_mpz_t(), 2), 70u);
    high_bit_seen |= mpz_sizeinbase(v.get_mpz_t(), 2) == 70u;
  }
  EXPECT_TRUE(high_bit_seen);
}

void expect_identical(const SimResult& a, const SimResult& b) {
  EXPECT_EQ(a.bits, b.bits);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stderr_mean, b.stderr_mean);
  EXPECT_EQ(a.zero_count, b.zero_count);
  EXPECT_EQ(a.samples, b.samples);
}

TEST(Simulation, FastKernelMatchesReference) {
  for (const SimConfig& c : {SimConfig{1, 64, 50, 1}, SimConfig{2, 64, 200, 2}, SimConfig{7, 130, 200, 3},
                             SimConfig{60, 0, 40, 4}, SimConfig{33, 1000, 20, 5}, SimConfig{40, 5, 30, 6}}) {
    expect_identical(sample_mean_ldm(c), sample_mean_ldm_reference(c));
    expect_identical(sample_mean_pdm(c), sample_mean_pdm_reference(c));
  }
}

TEST(Simulation, DeterministicGivenSeed) {
  const SimConfig c{100, 0, 300, 7};
  expect_identical(sample_mean_ldm(c), sample_mean_ldm(c));
  SimConfig other = c;
  other.seed = 8;
  EXPECT_NE(sample_mean_ldm(c).samples, sample_mean_ldm(other).samples);
}

TEST(Simulation, SmallNMeansMatchAnalyticValues) {
  struct Case {
    std::size_t n;
    double expected;
  };
  // <L_1> = 1/2, <|U1 - U2|> = 1/3, <L_4> = (5/6) / 5.
  for (const auto& [n, expected] : {Case{1, 0.5}, Case{2, 1.0 / 3.0}, Case{4, 1.0 / 6.0}}) {
    const auto r = sample_mean_ldm(SimConfig{n, 0, 200000, 21});
    EXPECT_NEAR(r.mean, expected, 3 * r.stderr_mean) << "n=" << n;
    EXPECT_FALSE(r.resolution_warning);
  }
}

TEST(Simulation, CoarseBitsRaiseTheResolutionWarning) {
  const auto r = sample_mean_ldm(SimConfig{64, 3, 200, 1});
  EXPECT_TRUE(r.resolution_warning);
}

TEST(Simulation, ConfigValidation) {
  EXPECT_THROW(sample_mean_ldm(SimConfig{0, 64, 10, 1}), ValidationError);
  EXPECT_THROW(sample_mean_ldm(SimConfig{10, 64, 0, 1}), ValidationError);
  EXPECT_THROW(sample_mean_ldm(SimConfig{10, 2000, 1, 1}), ResourceLimitError);
}

TEST(PdmProperties, ScaledMeanStaysInABand) {
  double lo = INFINITY;
  double hi = 0.0;
  for (std::size_t n = 64; n <= 1024; n *= 2) {
    const auto r = sample_mean_pdm(SimConfig{n, 64, 3000, 31});
    const double scaled = static_cast<double>(n) * r.mean;
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  EXPECT_LT(hi / lo, 3.0);
}

}  // namespace
}  // namespace kkldm
