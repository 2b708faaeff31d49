#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "alphaeta/numeric.hpp"
#include "alphaeta/parallel.hpp"
#include "alphaeta/rng.hpp"

using namespace alphaeta;

TEST(Numeric, QFunctionKnownValues) {
  EXPECT_DOUBLE_EQ(q_function(0.0), 0.5);
  EXPECT_NEAR(q_function(1.0), 0.15865525393145707, 1e-15);
  EXPECT_NEAR(q_function(2.0), 0.022750131948179209, 1e-15);
  EXPECT_NEAR(q_function(4.0), 3.1671241833119863e-05, 1e-18);
  EXPECT_NEAR(normal_cdf(1.0) + q_function(1.0), 1.0, 1e-15);
}

TEST(Numeric, WrapAngle) {
  EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
  EXPECT_NEAR(wrap_angle(-kPi / 2), 1.5 * kPi, 1e-15);
  EXPECT_NEAR(wrap_angle(5 * kPi), kPi, 1e-12);
  EXPECT_LT(wrap_angle(2 * kPi), 2 * kPi);
  EXPECT_NEAR(angle_diff(0.1, 2 * kPi - 0.1), 0.2, 1e-12);
}

TEST(Numeric, PowersOfTwo) {
  EXPECT_TRUE(is_power_of_two(1));
  EXPECT_TRUE(is_power_of_two(2048));
  EXPECT_FALSE(is_power_of_two(0));
  EXPECT_FALSE(is_power_of_two(12));
  EXPECT_EQ(log2_exact(2048), 11u);
  EXPECT_THROW(log2_exact(6), InputError);
}

TEST(Numeric, EntropyTerm) {
  EXPECT_DOUBLE_EQ(entropy_term(0.0), 0.0);
  EXPECT_DOUBLE_EQ(entropy_term(1.0), 0.0);
  EXPECT_DOUBLE_EQ(entropy_term(0.5), 0.5);
}

TEST(Rng, SubstreamsAreDeterministicAndDistinct) {
  EXPECT_EQ(substream_seed(1, "a", 0), substream_seed(1, "a", 0));
  EXPECT_NE(substream_seed(1, "a", 0), substream_seed(1, "a", 1));
  EXPECT_NE(substream_seed(1, "a", 0), substream_seed(1, "b", 0));
  EXPECT_NE(substream_seed(1, "a", 0), substream_seed(2, "a", 0));
  Rng a = make_rng(9, "m", 3), b = make_rng(9, "m", 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Parallel, ResultsInIndexOrderForAnyThreadCount) {
  auto f = [](std::size_t i) { return i * i; };
  auto one = parallel_map(1000, 1, f);
  auto many = parallel_map(1000, 7, f);
  EXPECT_EQ(one, many);
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i], i * i);
}

TEST(Parallel, PropagatesExceptions) {
  auto f = [](std::size_t i) -> int {
    if (i == 17) throw std::runtime_error("boom");
    return 0;
  };
  EXPECT_THROW(parallel_map(100, 4, f), std::runtime_error);
  EXPECT_THROW(parallel_map(100, 1, f), std::runtime_error);
}

TEST(Parallel, SplitTrials) {
  auto s = split_trials(10, 4);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0], 3u);
  EXPECT_EQ(s[1], 3u);
  EXPECT_EQ(s[2], 2u);
  EXPECT_EQ(s[3], 2u);
}
