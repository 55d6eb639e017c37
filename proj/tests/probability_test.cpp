#include "cachecraft/probability.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

#include "cachecraft/errors.hpp"
#include "support/generators.hpp"

namespace cachecraft {
namespace {

using testing::Rng;

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binom(4, 2), 6u);
  EXPECT_EQ(binom(10, 0), 1u);
  EXPECT_EQ(binom(10, 10), 1u);
  EXPECT_EQ(binom(3, 4), 0u);
  EXPECT_EQ(binom(-1, 0), 0u);
  EXPECT_EQ(binom(3, -1), 0u);
  EXPECT_EQ(binom(62, 31), 465428353255261088ull);
  EXPECT_DOUBLE_EQ(choose(6, 3), 20.0);
  EXPECT_NEAR(choose(100, 50) / 1.0089134454556419e29, 1.0, 1e-12);
}

TEST(Binomial, PascalRule) {
  for (int n = 1; n <= 60; ++n) {
    for (int k = 1; k < n; ++k) EXPECT_EQ(binom(n, k), binom(n - 1, k - 1) + binom(n - 1, k));
  }
}

TEST(Binomial, ChuVandermonde) {
  for (int m = 0; m <= 12; ++m) {
    for (int n = 0; n <= 12; ++n) {
      for (int k = 0; k <= m + n; ++k) {
        std::uint64_t sum = 0;
        for (int i = 0; i <= k; ++i) sum += binom(m, i) * binom(n, k - i);
        EXPECT_EQ(sum, binom(m + n, k)) << m << " " << n << " " << k;
      }
    }
  }
}

TEST(Multinomial, ValuesAndValidation) {
  EXPECT_DOUBLE_EQ(multinomial(4, {2, 1, 1}), 12.0);
  EXPECT_DOUBLE_EQ(multinomial(5, {5, 0}), 1.0);
  EXPECT_THROW(multinomial(4, {2, 1}), ValidationError);
  EXPECT_THROW(multinomial(1, {2, -1}), ValidationError);
}

TEST(CheckDistribution, RejectsBadVectors) {
  EXPECT_NO_THROW(check_distribution({0.25, 0.75}));
  EXPECT_THROW(check_distribution({}), ValidationError);
  EXPECT_THROW(check_distribution({0.5, 0.6}), ValidationError);
  EXPECT_THROW(check_distribution({1.5, -0.5}), ValidationError);
}

TEST(OrderStatistics, TwoUniformFiles) {
  const OrderStatTable t = order_stat_pmf({0.5, 0.5}, 2);
  EXPECT_DOUBLE_EQ(t(0, 0), 0.75);
  EXPECT_DOUBLE_EQ(t(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(t(1, 0), 0.25);
  EXPECT_DOUBLE_EQ(t(1, 1), 0.75);
}

TEST(OrderStatistics, SingleUserIsThePopularity) {
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  const OrderStatTable t = order_stat_pmf(p, 1);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(t(0, i), p[i]);
}

TEST(OrderStatistics, ClosedFormMatchesEnumeration) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int K = rng.integer(1, 6);
    const int N = rng.integer(1, 6);
    const std::vector<double> p = testing::random_popularities(rng, N);
    const OrderStatTable closed = order_stat_pmf(p, K);
    const OrderStatTable oracle = order_stat_oracle_serial(p, K);
    ASSERT_EQ(closed.num_users(), K);
    ASSERT_EQ(closed.num_files(), N);
    for (int m = 0; m < K; ++m) {
      for (int i = 0; i < N; ++i) EXPECT_NEAR(closed(m, i), oracle(m, i), 1e-12);
    }
  }
}

TEST(OrderStatistics, RowsAreDistributionsAndColumnsCountRequests) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int K = rng.integer(1, 10);
    const int N = rng.integer(1, 12);
    const std::vector<double> p = testing::random_popularities(rng, N);
    const OrderStatTable t = order_stat_pmf(p, K);
    for (int m = 0; m < K; ++m) EXPECT_NEAR(t.probs.row(m).sum(), 1.0, 1e-12);
    // Summing over m counts the expected number of requests for file i.
    for (int i = 0; i < N; ++i) EXPECT_NEAR(t.probs.col(i).sum(), K * p[i], 1e-12);
  }
}

TEST(OrderStatistics, ParallelOracleMatchesSerialBitForBit) {
  Rng rng(8);
  for (const auto& [K, N] : {std::pair{3, 4}, {5, 6}, {7, 5}, {2, 9}}) {
    const std::vector<double> p = testing::random_popularities(rng, N);
    const OrderStatTable a = order_stat_oracle(p, K);
    const OrderStatTable b = order_stat_oracle_serial(p, K);
    for (int m = 0; m < K; ++m) {
      for (int i = 0; i < N; ++i) EXPECT_EQ(a(m, i), b(m, i));
    }
  }
}

TEST(OrderStatistics, OracleHonoursTheCap) {
  ::setenv("CACHECRAFT_ENUM_CAP", "100", 1);
  EXPECT_THROW(order_stat_oracle(std::vector<double>(5, 0.2), 3), LimitError);
  EXPECT_THROW(order_stat_oracle_serial(std::vector<double>(5, 0.2), 3), LimitError);
  EXPECT_NO_THROW(order_stat_oracle(std::vector<double>(4, 0.25), 3));
  ::unsetenv("CACHECRAFT_ENUM_CAP");
}

TEST(OrderStatistics, GroupTableUsesTheGroupSize) {
  const std::vector<double> p{0.5, 0.3, 0.2};
  const OrderStatTable g = group_order_stat_pmf(p, 2);
  const OrderStatTable t = order_stat_pmf(p, 2);
  EXPECT_EQ(g.probs, t.probs);
  EXPECT_THROW(order_stat_pmf(p, 0), ValidationError);
}

TEST(OrderStatistics, LargeInstanceStaysNonNegative) {
  const OrderStatTable t = order_stat_pmf(zipf_popularities(50, 1.2), 20);
  EXPECT_GE(t.probs.minCoeff(), 0.0);
  for (int m = 0; m < 20; ++m) EXPECT_NEAR(t.probs.row(m).sum(), 1.0, 1e-9);
}

}  // namespace
}  // namespace cachecraft
