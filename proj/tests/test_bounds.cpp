#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "alphaeta/bounds.hpp"

using namespace alphaeta;

TEST(WedgeCounts, ReferenceParameters) {
  auto w = wedge_counts(4e4, 2048);
  EXPECT_NEAR(w.N_het, 2048.0 / (kPi * 200.0), 1e-12);
  EXPECT_NEAR(w.gamma_het, 3.26, 0.005);
  EXPECT_NEAR(w.gamma_het_strict, 2.26, 0.005);
  EXPECT_DOUBLE_EQ(w.N_phase, w.N_het / 2);
  EXPECT_DOUBLE_EQ(w.gamma_het, 2 * w.gamma_phase);
  EXPECT_FALSE(w.no_randomization);
}

TEST(WedgeCounts, DirectEvaluationAndClamp) {
  EXPECT_NEAR(wedge_counts(100, 200).N_het, 200.0 / (10.0 * kPi), 1e-12);
  auto w = wedge_counts(1e6, 64);
  EXPECT_TRUE(w.no_randomization);
  EXPECT_EQ(w.gamma_het, 0.0);
  EXPECT_EQ(w.gamma_het_strict, 0.0);
  EXPECT_THROW(wedge_counts(0.0, 64), InputError);
  EXPECT_THROW(wedge_counts(1.0, 1), InputError);
}

TEST(Unicity, ReferenceExample) {
  auto b = unicity_bounds(4400, 2048, 3, 7);
  EXPECT_EQ(*b.n0.reported(), 550);
  EXPECT_EQ(*b.n1.reported(), 489);
  EXPECT_NEAR(*b.n1.value, 4400.0 / 9.0, 1e-9);
}

TEST(Unicity, NonrandomLimitAndInfinity) {
  auto b = unicity_bounds(4400, 2048, 0, 0);
  EXPECT_NEAR(*b.n0.value, 400.0, 1e-9);
  EXPECT_NEAR(*b.n1.value, 400.0, 1e-9);
  auto inf = unicity_bounds(16, 16, 15, 15);
  EXPECT_TRUE(inf.n0.infinite());
  EXPECT_TRUE(inf.n1.infinite());
  EXPECT_EQ(inf.n1.to_json(), "infinite");
}

TEST(Unicity, KpaBoundTighterWithArcRelation) {
  for (double g : {1.0, 2.0, 3.0, 10.0}) {
    auto b = unicity_bounds(4400, 2048, g, 2 * g + 1);
    EXPECT_GT(*b.n0.value, *b.n1.value);
  }
}

TEST(Complexity, Examples) {
  EXPECT_NEAR(search_complexity(3, 4400, 11).log2_work, 400 * std::log2(3.0), 1e-9);
  EXPECT_EQ(search_complexity(1, 4400, 11).log2_work, 0.0);
  EXPECT_NEAR(search_complexity(2, 16, 4).log2_work, 4.0, 1e-12);
  EXPECT_TRUE(search_complexity(0.5, 16, 4).zero_complexity);
  // Additive in |K|.
  EXPECT_NEAR(search_complexity(3, 300, 4).log2_work,
              search_complexity(3, 100, 4).log2_work + search_complexity(3, 200, 4).log2_work, 1e-9);
}

TEST(ErrorFormulas, Examples) {
  auto e = error_formulas(100, 1000);
  EXPECT_NEAR(e.lambda_prime_het / 1e-44, 1.9, 0.05);  // two significant figures
  EXPECT_EQ(e.P_e_bob_approx, 0.25 * std::exp(-4000.0));
  EXPECT_LT(e.P_e_bob_helstrom, kBerFloor);
  EXPECT_NEAR(e.P_b_eve, 2.0 / (kPi * 10.0), 1e-15);
  EXPECT_DOUBLE_EQ(error_formulas(1, 0).P_e_bob_helstrom, 0.5);
  EXPECT_NEAR(error_formulas(1, 1).P_e_bob_helstrom, 0.00460, 1e-5);
}

TEST(ErrorFormulas, MonotoneInEnergy) {
  ErrorFormulas prev = error_formulas(0.01, 0.01);
  for (double s = 0.02; s < 50; s *= 1.3) {
    auto e = error_formulas(s, s);
    EXPECT_LE(e.P_e_bob_helstrom, prev.P_e_bob_helstrom);
    EXPECT_LE(e.P_e_bob_approx, prev.P_e_bob_approx);
    EXPECT_LE(e.lambda_prime_het, prev.lambda_prime_het);
    EXPECT_LE(e.lambda_prime_phase, prev.lambda_prime_phase);
    EXPECT_LE(e.P_b_eve, prev.P_b_eve);
    prev = e;
  }
}

TEST(Capacity, Examples) {
  EXPECT_EQ(*capacity_unicity(4400, 9).reported(), 489);
  EXPECT_NEAR(*capacity_unicity(4400, std::log2(2048.0)).value, 400.0, 1e-9);
  EXPECT_TRUE(capacity_unicity(4400, 0.0).infinite());
  EXPECT_TRUE(capacity_unicity(4400, -1.0).infinite());
}

TEST(Report, ReferenceParameters) {
  auto r = compute_bounds(BoundsInput{});
  EXPECT_EQ(r.gamma, 3.0);
  EXPECT_EQ(r.lambda, 7.0);
  EXPECT_EQ(*r.unicity.n0.reported(), 550);
  EXPECT_EQ(*r.unicity.n1.reported(), 489);
  EXPECT_NEAR(r.complexity.log2_work, 634.0, 0.01 * 634.0);
  EXPECT_EQ(*r.capacity_bound.reported(), 489);
  auto j = r.to_json();
  EXPECT_EQ(j["n0_bound"], 550);
  std::ostringstream os;
  r.write_text(os);
  EXPECT_NE(os.str().find("550"), std::string::npos);
}

TEST(Report, JsonInputAndOverrides) {
  auto in = BoundsInput::from_json({{"key_bits", 16}, {"M", 16}, {"S", 20}, {"gamma", 2.0}});
  auto r = compute_bounds(in);
  EXPECT_EQ(r.lambda, 5.0);
  EXPECT_NEAR(r.complexity.log2_work, 4.0, 1e-12);
  EXPECT_THROW(BoundsInput::from_json({{"gamma_rounding", "up"}}), InputError);
  BoundsInput bad;
  bad.M = 100;
  EXPECT_THROW(compute_bounds(bad), InputError);
}
