#include "cachecraft/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>

#include "cachecraft/errors.hpp"
#include "cachecraft/schemes.hpp"
#include "support/generators.hpp"

namespace cachecraft {
namespace {

using testing::Rng;

const std::vector<double> kTableLengths{9.0 / 6, 8.0 / 6, 7.0 / 6, 5.0 / 6, 4.0 / 6, 3.0 / 6};
const std::vector<double> kTablePopularities{0.1176, 0.1566, 0.1965, 0.1062, 0.2897, 0.1333};

std::string validation_message(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST(SystemConfig, UniformIsValid) {
  const SystemConfig cfg(4, std::vector<double>(6, 1.0), std::vector<double>(6, 1.0 / 6),
                         std::vector<double>(4, 1.0));
  EXPECT_EQ(cfg, SystemConfig::uniform(4, 6, 1.0));
  EXPECT_TRUE(cfg.uniform_lengths());
  EXPECT_TRUE(cfg.uniform_popularity());
  EXPECT_TRUE(cfg.uniform_cache());
  EXPECT_FALSE(cfg.classes());
  EXPECT_EQ(cfg.small_users(), 0);
  EXPECT_EQ(cfg.large_users(), 4);
}

TEST(SystemConfig, PublishedTableIsValidAfterRenormalizing) {
  const SystemConfig cfg(4, kTableLengths, kTablePopularities, std::vector<double>(4, 1.0));
  const auto& p = cfg.popularities();
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-15);
  EXPECT_NEAR(p[4], 0.2897 / 0.9999, 1e-15);
  EXPECT_FALSE(cfg.uniform_lengths());
}

TEST(SystemConfig, RejectsInvalidInput) {
  EXPECT_EQ(validation_message([] {
              SystemConfig(2, {1.0, 1.0}, {0.45, 0.45}, {1.0, 1.0});
            }),
            "popularities must sum to 1");
  EXPECT_THROW(SystemConfig(0, {1.0}, {1.0}, {}), ValidationError);
  EXPECT_THROW(SystemConfig(2, {1.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}), ValidationError);
  EXPECT_THROW(SystemConfig(2, {1.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}), ValidationError);
  EXPECT_THROW(SystemConfig(2, {1.0, 1.0}, {0.5, 0.5}, {1.0, -1.0}), ValidationError);
  EXPECT_THROW(SystemConfig(2, {1.0, 1.0}, {0.5, 0.5}, {1.0}), ValidationError);
  EXPECT_THROW(SystemConfig(2, {1.0, 1.0}, {0.5}, {1.0, 1.0}), ValidationError);
  EXPECT_THROW(SystemConfig(21, {1.0}, {1.0}, std::vector<double>(21, 0.0)), ValidationError);
}

TEST(SystemConfig, ClassAnnotation) {
  const SystemConfig cfg =
      SystemConfig::with_classes(4, {1.0, 1.0}, {0.5, 0.5}, {1, 0.5, 2.0});
  EXPECT_EQ(cfg.cache_sizes(), (std::vector<double>{0.5, 2.0, 2.0, 2.0}));
  EXPECT_EQ(cfg.small_users(), 1);
  EXPECT_EQ(cfg.large_users(), 3);
  EXPECT_EQ(cfg.small_user_set(), UserSet{1});
  EXPECT_NO_THROW(SystemConfig::with_classes(2, {1.0}, {1.0}, {1, 1.0, 1.0}));
  EXPECT_THROW(SystemConfig::with_classes(2, {1.0}, {1.0}, {1, 2.0, 1.0}), ValidationError);
  EXPECT_THROW(SystemConfig::with_classes(2, {1.0}, {1.0}, {3, 1.0, 1.0}), ValidationError);
  EXPECT_THROW(SystemConfig(2, {1.0}, {1.0}, {1.0, 1.0}, CacheClasses{1, 0.5, 1.0}),
               ValidationError);
}

TEST(SystemConfig, ExpectedRequestLengthAndResizing) {
  const SystemConfig cfg(2, {2.0, 1.0}, {0.25, 0.75}, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(cfg.expected_request_length(), 1.25);
  const SystemConfig bigger = cfg.with_cache_sizes({1.5, 2.5}, CacheClasses{1, 1.5, 2.5});
  EXPECT_EQ(bigger.file_lengths(), cfg.file_lengths());
  EXPECT_EQ(bigger.small_users(), 1);
}

TEST(Zipf, Examples) {
  for (double p : zipf_popularities(6, 0.0)) EXPECT_DOUBLE_EQ(p, 1.0 / 6);
  const std::vector<double> z = zipf_popularities(6, 0.56);
  EXPECT_NEAR(std::accumulate(z.begin(), z.end(), 0.0), 1.0, 1e-15);
  for (int l = 1; l < 6; ++l) EXPECT_GT(z[l - 1], z[l]);
  EXPECT_NEAR(z[0], 0.2897, 5e-5);
  EXPECT_NEAR(z[5], 0.1062, 5e-5);
  EXPECT_EQ(zipf_popularities(1, 3.0), std::vector<double>{1.0});
  EXPECT_THROW(zipf_popularities(0, 1.0), ValidationError);
  EXPECT_THROW(zipf_popularities(3, -1.0), ValidationError);
}

TEST(EnumerationCap, DefaultAndOverride) {
  ::unsetenv("CACHECRAFT_ENUM_CAP");
  EXPECT_EQ(enumeration_cap(), kDefaultEnumerationCap);
  ::setenv("CACHECRAFT_ENUM_CAP", "5000", 1);
  EXPECT_EQ(enumeration_cap(), 5000.0);
  ::unsetenv("CACHECRAFT_ENUM_CAP");
  EXPECT_EQ(demand_count(6, 4), 1296.0);
  EXPECT_TRUE(std::isinf(demand_count(1000, 200)));
}

TEST(Placement, StoredAmountAndShares) {
  Placement pl(2, 1);
  pl.set_size(0, 0, 0.25);
  pl.set_size(0, 1, 0.25);
  pl.set_size(0, 3, 0.5);
  pl.set_shares_from_sizes();
  EXPECT_DOUBLE_EQ(pl.stored_amount(0, 0), 0.75);
  EXPECT_DOUBLE_EQ(pl.stored_amount(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(pl.cache_share(1, 0), 0.5);
}

TEST(ValidatePlacement, TheoremOneIsFeasible) {
  const SystemConfig cfg = SystemConfig::uniform(4, 6, 3);
  const Placement pl = expand_to_placement(cfg, theorem1_scheme(4, 6, 3));
  EXPECT_TRUE(validate_placement(cfg, pl, 1e-12).feasible());
}

TEST(ValidatePlacement, PublishedTableTwoIsFeasible) {
  const SystemConfig cfg(4, kTableLengths, kTablePopularities, std::vector<double>(4, 1.0));
  const std::vector<double> empty{0.833, 0.583, 0.417, 0.167, 0.0, 0.0};
  const std::vector<double> single{0.167, 0.188, 0.188, 0.167, 0.167, 0.125};
  Placement pl(4, 6);
  for (int l = 0; l < 6; ++l) {
    pl.set_size(l, 0, empty[l]);
    for (int k = 0; k < 4; ++k) {
      pl.set_size(l, singleton(k), single[l]);
      pl.set_cache_share(k, l, single[l]);
    }
  }
  const FeasibilityReport report = validate_placement(cfg, pl, 5e-3);
  EXPECT_TRUE(report.feasible()) << report.violations.front().constraint;
  EXPECT_FALSE(validate_placement(cfg, pl, 1e-6).feasible());
}

TEST(ValidatePlacement, NegativeSizeIsReported) {
  const SystemConfig cfg = SystemConfig::uniform(2, 1, 1.0);
  Placement pl(2, 1);
  pl.set_size(0, 0, 1.5);
  pl.set_size(0, 3, -0.5);
  pl.set_shares_from_sizes();
  const FeasibilityReport report = validate_placement(cfg, pl, 1e-9);
  ASSERT_FALSE(report.feasible());
  EXPECT_EQ(report.violations.front().constraint, "nonnegative[file 1, {1,2}]");
  EXPECT_DOUBLE_EQ(report.max_violation(), 0.5);
  EXPECT_THROW(validate_placement(SystemConfig::uniform(3, 1, 1.0), pl, 1e-9), ValidationError);
}

// Direct statement of the four constraint families, used as the oracle.
bool feasible_by_definition(const SystemConfig& cfg, const Placement& pl, double tol) {
  const int K = cfg.num_users();
  for (int l = 0; l < cfg.num_files(); ++l) {
    double total = 0.0;
    for (int s = 0; s < (1 << K); ++s) {
      if (pl.size(l, s) < -tol) return false;
      total += pl.size(l, s);
    }
    if (std::abs(total - cfg.file_lengths()[l]) > tol) return false;
  }
  for (int k = 0; k < K; ++k) {
    double mem = 0.0;
    for (int l = 0; l < cfg.num_files(); ++l) {
      double held = 0.0;
      for (int s = 0; s < (1 << K); ++s) {
        if ((s >> k) & 1) held += pl.size(l, s);
      }
      if (held > pl.cache_share(k, l) + tol) return false;
      mem += pl.cache_share(k, l);
    }
    if (mem > cfg.cache_sizes()[k] + tol) return false;
  }
  return true;
}

TEST(ValidatePlacement, AgreesWithDefinitionOnSmallInstances) {
  Rng rng(11);
  int feasible = 0;
  int infeasible = 0;
  for (int K = 1; K <= 3; ++K) {
    for (int N = 1; N <= 2; ++N) {
      for (int trial = 0; trial < 300; ++trial) {
        const SystemConfig base(K, testing::random_lengths(rng, N),
                                testing::random_popularities(rng, N), std::vector<double>(K, 0.0));
        Placement pl = testing::random_placement(rng, base);
        std::vector<double> mem = testing::used_memory(pl);
        // Perturb one quantity by +-0.01, which is either inside or outside the
        // tolerance depending on the draw.
        const double tol = rng.chance(0.5) ? 1e-9 : 0.02;
        const double eps = rng.chance(0.5) ? 0.01 : -0.01;
        switch (rng.integer(0, 4)) {
          case 0: {
            const int l = rng.integer(0, N - 1);
            const auto s = static_cast<UserSet>(rng.integer(0, (1 << K) - 1));
            pl.set_size(l, s, pl.size(l, s) + eps);
            break;
          }
          case 1: {
            const int k = rng.integer(0, K - 1);
            const int l = rng.integer(0, N - 1);
            pl.set_cache_share(k, l, pl.cache_share(k, l) + eps);
            break;
          }
          case 2: mem[rng.integer(0, K - 1)] += eps; break;
          default: break;
        }
        for (double& m : mem) m = std::max(m, 0.0);
        const SystemConfig cfg = base.with_cache_sizes(mem);
        const bool expected = feasible_by_definition(cfg, pl, tol);
        EXPECT_EQ(validate_placement(cfg, pl, tol).feasible(), expected);
        (expected ? feasible : infeasible)++;
      }
    }
  }
  EXPECT_GT(feasible, 100);
  EXPECT_GT(infeasible, 100);
}

TEST(SubsetClasses, Classification) {
  const UserSet small = full_set(2);
  EXPECT_EQ(classify_subset(0, small), SubsetClass::empty);
  EXPECT_EQ(classify_subset(0b0011, small), SubsetClass::small_only);
  EXPECT_EQ(classify_subset(0b1100, small), SubsetClass::large_only);
  EXPECT_EQ(classify_subset(0b0101, small), SubsetClass::mixed);
}

TEST(GroupedScheme, ValuesByClass) {
  const GroupedScheme gs = GroupedScheme::two_tier(2, {0.1, 0.2, 0.3, 0, 0}, {0.1, 0.4, 0.5, 0, 0},
                                                   {0.1, 0, 0.6, 0.7, 0.8});
  EXPECT_TRUE(gs.structural_errors().empty());
  EXPECT_DOUBLE_EQ(gs.value_for(3, 0b0011), 0.3);
  EXPECT_DOUBLE_EQ(gs.value_for(0, 0b1100), 0.5);
  EXPECT_DOUBLE_EQ(gs.value_for(0, 0b0110), 0.6);
  EXPECT_DOUBLE_EQ(gs.value_for(0, 0b1000), 0.4);
  EXPECT_DOUBLE_EQ(gs.value_for(0, 0), 0.1);
  EXPECT_DOUBLE_EQ(gs.scaled(2.0).value_for(0, 0b1111), 1.6);
}

TEST(GroupedScheme, StructuralZeros) {
  EXPECT_FALSE(GroupedScheme::two_tier(2, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0.1, 0, 0, 0})
                   .structural_errors()
                   .empty());
  EXPECT_FALSE(GroupedScheme::two_tier(1, {0, 0, 0.1, 0}, {0, 0, 0, 0}, {0, 0, 0, 0})
                   .structural_errors()
                   .empty());
  EXPECT_FALSE(GroupedScheme::two_tier(1, {0.2, 0, 0, 0}, {0.1, 0, 0, 0}, {0.2, 0, 0, 0})
                   .structural_errors()
                   .empty());
  EXPECT_FALSE(GroupedScheme::homogeneous({0.5, -0.1}).structural_errors().empty());
  EXPECT_THROW(GroupedScheme::two_tier(2, {0, 0, 0}, {0, 0}, {0, 0, 0}), ValidationError);
}

TEST(Demand, RangeChecks) {
  const SystemConfig cfg = SystemConfig::uniform(2, 3, 1);
  EXPECT_NO_THROW(check_demand(cfg, {{0, 2}}));
  EXPECT_THROW(check_demand(cfg, {{0, 3}}), ValidationError);
  EXPECT_THROW(check_demand(cfg, {{0}}), ValidationError);
  EXPECT_LT((DemandVector{{0, 1}}), (DemandVector{{1, 0}}));
}

}  // namespace
}  // namespace cachecraft
