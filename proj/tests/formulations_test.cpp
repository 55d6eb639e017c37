#include "cachecraft/formulations.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

#include "cachecraft/errors.hpp"
#include "cachecraft/evaluator.hpp"
#include "cachecraft/schemes.hpp"
#include "support/generators.hpp"

namespace cachecraft {
namespace {

using testing::Rng;

const std::vector<double> kTableLengths{9.0 / 6, 8.0 / 6, 7.0 / 6, 5.0 / 6, 4.0 / 6, 3.0 / 6};

std::vector<double> table_popularities() {
  const std::vector<double> z = zipf_popularities(6, 0.56);
  return {z[4], z[2], z[1], z[5], z[0], z[3]};
}

double optimum(const SystemConfig& cfg, Formulation f) {
  return solve_problem(build(cfg, f)).objective;
}

TEST(Parse, RoundTripsEveryId) {
  for (Formulation f : {Formulation::general, Formulation::homogeneous, Formulation::simplex_form,
                        Formulation::popularity_first, Formulation::length_first,
                        Formulation::two_tier, Formulation::full_het}) {
    EXPECT_EQ(parse_formulation(to_string(f)), f);
  }
  EXPECT_THROW(parse_formulation("pf"), ValidationError);
}

TEST(General, UniformMatchesClosedForm) {
  const SystemConfig cfg = SystemConfig::uniform(4, 6, 3);
  const SolvedProblem s = solve_problem(build_general(cfg));
  EXPECT_NEAR(s.objective, 2.0 / 3.0, 1e-9);
  EXPECT_TRUE(validate_placement(cfg, s.placement, 1e-6).feasible());
  EXPECT_NEAR(expected_rate(cfg, s.placement).expected_rate, s.objective, 1e-9);
}

TEST(General, EmptyCachesSendEveryRequestedFile) {
  const SystemConfig cfg(3, {1.0, 2.0, 0.5}, {0.2, 0.5, 0.3}, {0.0, 0.0, 0.0});
  EXPECT_NEAR(optimum(cfg, Formulation::general), 3 * cfg.expected_request_length(), 1e-9);
  const SystemConfig uni = SystemConfig::uniform(4, 3, 0.0);
  EXPECT_NEAR(optimum(uni, Formulation::general), 4.0, 1e-9);
}

TEST(General, SizeGuardUsesEnvironmentCap) {
  const SystemConfig cfg = SystemConfig::uniform(3, 4, 1.0);
  ::setenv("CACHECRAFT_ENUM_CAP", "100", 1);
  EXPECT_THROW(build_general(cfg), LimitError);
  ::unsetenv("CACHECRAFT_ENUM_CAP");
  EXPECT_NO_THROW(build_general(cfg));
}

TEST(General, VariableNamesAreSemantic) {
  const BuiltProblem bp = build_general(SystemConfig::uniform(2, 2, 1.0));
  EXPECT_EQ(bp.vars.label(bp.vars.index("W[2,{1,2}]")).subset, UserSet{3});
  EXPECT_EQ(bp.vars.label(bp.vars.index("mu[1,2]")).user, 0);
  EXPECT_EQ(bp.vars.label(bp.vars.index("t[{1,2};2,1]")).role, VarRole::epigraph);
  // 2 files x 4 subsets + 4 shares + 4 epigraph columns for the one pair.
  EXPECT_EQ(bp.lp.num_vars(), 16);
  EXPECT_NE(export_lp(bp.lp).find("W_2__1_2__"), std::string::npos);
}

TEST(General, TableTwoMemoryRow) {
  const SystemConfig cfg(4, kTableLengths, table_popularities(), std::vector<double>(4, 1.0));
  const SolvedProblem s = solve_problem(build_general(cfg));
  const std::vector<double> row{0.167, 0.188, 0.188, 0.167, 0.167, 0.125};
  for (int l = 0; l < 6; ++l) EXPECT_NEAR(s.placement.stored_amount(0, l), row[l], 5e-3);
}

TEST(Homogeneous, TheoremOneSupport) {
  const BuiltProblem bp = build_homogeneous(SystemConfig::uniform(4, 6, 3));
  const SolvedProblem s = solve_problem(bp);
  EXPECT_NEAR(s.objective, 2.0 / 3.0, 1e-12);
  ASSERT_TRUE(s.grouped);
  for (int j = 0; j <= 4; ++j) {
    EXPECT_NEAR(s.grouped->value(0, j, SubsetClass::empty), j == 2 ? 1.0 / 6 : 0.0, 1e-12);
  }
}

TEST(Homogeneous, FullCachesCostNothing) {
  const SolvedProblem s = solve_problem(build_homogeneous(SystemConfig::uniform(3, 5, 5)));
  EXPECT_NEAR(s.objective, 0.0, 1e-12);
  EXPECT_NEAR(s.grouped->value(0, 3, SubsetClass::empty), 1.0, 1e-12);
}

TEST(Homogeneous, MixtureBetweenIntegerPoints) {
  // t = 2/3: weight 1/3 on j=0 (rate 4) and 2/3 on j=1 (rate 3/2).
  EXPECT_NEAR(optimum(SystemConfig::uniform(4, 6, 1), Formulation::homogeneous),
              4.0 / 3 + 1.0, 1e-12);
}

TEST(Homogeneous, ScalesWithFileLength) {
  EXPECT_NEAR(optimum(SystemConfig::uniform(4, 6, 6, 2.0), Formulation::homogeneous),
              2 * 2.0 / 3.0, 1e-12);
}

TEST(Homogeneous, RejectsHeterogeneousInput) {
  EXPECT_THROW(build_homogeneous(SystemConfig(2, {1.0, 2.0}, {0.5, 0.5}, {1.0, 1.0})),
               ValidationError);
  EXPECT_THROW(build_homogeneous(SystemConfig(2, {1.0, 1.0}, {0.4, 0.6}, {1.0, 1.0})),
               ValidationError);
  EXPECT_THROW(build_homogeneous(SystemConfig(2, {1.0, 1.0}, {0.5, 0.5}, {1.0, 0.5})),
               ValidationError);
}

TEST(SimplexForm, WeightsAtOneThird) {
  const BuiltProblem bp = build_simplex_form(SystemConfig::uniform(4, 6, 1));
  const SolvedProblem s = solve_problem(bp);
  EXPECT_NEAR(s.solution.x[bp.vars.index("a[0]")], 1.0 / 3, 1e-12);
  EXPECT_NEAR(s.solution.x[bp.vars.index("a[1]")], 2.0 / 3, 1e-12);
}

TEST(SimplexForm, MatchesHomogeneousAndCacheRowIsTight) {
  for (int K = 2; K <= 10; ++K) {
    for (double M = 0.0; M <= 4.0 + 1e-9; M += 0.5) {
      const SystemConfig cfg = SystemConfig::uniform(K, 4, M);
      const BuiltProblem bp = build_simplex_form(cfg);
      const SolvedProblem s = solve_problem(bp);
      EXPECT_NEAR(s.objective, optimum(cfg, Formulation::homogeneous), 1e-9) << K << " " << M;
      const Constraint& cache = bp.lp.constraints().back();
      EXPECT_NEAR(bp.lp.row_activity(1, s.solution.x), cache.rhs, 1e-9) << K << " " << M;
    }
  }
  EXPECT_NEAR(optimum(SystemConfig::uniform(3, 2, 2), Formulation::simplex_form), 0.0, 1e-12);
}

TEST(PopularityFirst, UniformPopularityCollapsesToHomogeneous) {
  for (double M : {0.0, 1.0, 2.5, 4.0}) {
    const SystemConfig cfg = SystemConfig::uniform(3, 4, M);
    EXPECT_NEAR(optimum(cfg, Formulation::popularity_first),
                optimum(cfg, Formulation::homogeneous), 1e-9);
  }
}

TEST(PopularityFirst, EmptyCaches) {
  const SystemConfig cfg(4, std::vector<double>(6, 1.0), zipf_popularities(6, 0.56),
                         std::vector<double>(4, 0.0));
  EXPECT_NEAR(optimum(cfg, Formulation::popularity_first), 4.0, 1e-12);
}

TEST(PopularityFirst, RanksByPopularityWithIndexTies) {
  const SystemConfig cfg(2, std::vector<double>(4, 1.0), {0.2, 0.3, 0.3, 0.2}, {1.0, 1.0});
  EXPECT_EQ(build_popularity_first(cfg).file_order, (std::vector<int>{1, 2, 0, 3}));
  EXPECT_THROW(build_popularity_first(SystemConfig(2, {1.0, 2.0}, {0.5, 0.5}, {1.0, 1.0})),
               ValidationError);
}

TEST(PopularityFirst, MatchesGeneralOnSmallZipf) {
  for (double M : {0.5, 1.0, 2.0}) {
    const SystemConfig cfg(3, std::vector<double>(3, 1.0), zipf_popularities(3, 0.8),
                           std::vector<double>(3, M));
    EXPECT_NEAR(optimum(cfg, Formulation::popularity_first), optimum(cfg, Formulation::general),
                1e-6);
  }
}

TEST(LengthFirst, RanksByLengthThenPopularity) {
  const SystemConfig cfg(2, {1.0, 2.0, 1.0, 0.5}, {0.1, 0.2, 0.4, 0.3}, {1.0, 1.0});
  EXPECT_EQ(build_length_first(cfg).file_order, (std::vector<int>{1, 2, 0, 3}));
}

TEST(LengthFirst, UniformCaseIsTheoremOne) {
  const SystemConfig cfg = SystemConfig::uniform(4, 6, 2);
  EXPECT_NEAR(optimum(cfg, Formulation::length_first), 1.0 + 2.0 / 9, 1e-9);
}

TEST(LengthFirst, MatchesGeneralForLengthsOnly) {
  for (double M : {0.5, 1.5}) {
    const SystemConfig cfg(3, {1.5, 1.0, 0.5}, std::vector<double>(3, 1.0 / 3),
                           std::vector<double>(3, M));
    EXPECT_NEAR(optimum(cfg, Formulation::length_first), optimum(cfg, Formulation::general),
                1e-6);
  }
}

TEST(LengthFirst, UsesSmallestCacheWhenSizesDiffer) {
  const SystemConfig cfg(2, {1.0, 1.0}, {0.5, 0.5}, {0.5, 1.5});
  const SystemConfig lo = cfg.with_cache_sizes({0.5, 0.5});
  EXPECT_NEAR(optimum(cfg, Formulation::length_first), optimum(lo, Formulation::length_first),
              1e-12);
}

TEST(TwoTier, NeedsClasses) {
  try {
    build_two_tier(SystemConfig::uniform(4, 6, 3));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "cache classes required");
  }
}

TEST(TwoTier, EqualClassesCollapse) {
  const SystemConfig cfg = SystemConfig::with_classes(4, std::vector<double>(6, 1.0),
                                                      std::vector<double>(6, 1.0 / 6), {2, 3.0, 3.0});
  EXPECT_NEAR(optimum(cfg, Formulation::two_tier), 2.0 / 3.0, 1e-9);
}

TEST(TwoTier, EmptyClassBuildsHomogeneous) {
  const SystemConfig cfg = SystemConfig::with_classes(3, std::vector<double>(4, 1.0),
                                                      std::vector<double>(4, 0.25), {0, 0.0, 2.0});
  const BuiltProblem bp = build_two_tier(cfg);
  EXPECT_EQ(bp.requested, Formulation::two_tier);
  EXPECT_EQ(bp.built, Formulation::homogeneous);
  EXPECT_NEAR(solve_problem(bp).objective,
              optimum(SystemConfig::uniform(3, 4, 2.0), Formulation::homogeneous), 1e-12);
}

TEST(TwoTier, GeneralIsNoWorse) {
  const SystemConfig cfg = SystemConfig::with_classes(4, std::vector<double>(6, 1.0),
                                                      std::vector<double>(6, 1.0 / 6), {2, 3.2, 4.8});
  const double two_tier = optimum(cfg, Formulation::two_tier);
  EXPECT_GE(two_tier + 1e-9, optimum(cfg, Formulation::general));
  const SolvedProblem s = solve_problem(build_two_tier(cfg));
  EXPECT_TRUE(validate_placement(cfg, s.placement, 1e-6).feasible());
  EXPECT_NEAR(expected_rate(cfg, s.placement).expected_rate, two_tier, 1e-9);
}

TEST(FullHet, EqualClassesMatchHomogeneous) {
  const SystemConfig cfg = SystemConfig::with_classes(3, std::vector<double>(3, 1.0),
                                                      std::vector<double>(3, 1.0 / 3), {1, 1.5, 1.5});
  EXPECT_NEAR(optimum(cfg, Formulation::full_het),
              optimum(SystemConfig::uniform(3, 3, 1.5), Formulation::homogeneous), 1e-9);
}

TEST(FullHet, EmptyCaches) {
  const SystemConfig cfg = SystemConfig::with_classes(4, kTableLengths, table_popularities(),
                                                      {2, 0.0, 0.0});
  EXPECT_NEAR(optimum(cfg, Formulation::full_het), 4 * cfg.expected_request_length(), 1e-9);
}

TEST(FullHet, EmptyClassBuildsLengthFirst) {
  const SystemConfig cfg = SystemConfig::with_classes(3, {1.0, 0.5}, {0.5, 0.5}, {3, 1.0, 1.0});
  EXPECT_EQ(build_full_het(cfg).built, Formulation::length_first);
  EXPECT_THROW(build_full_het(SystemConfig::uniform(2, 2, 1)), ValidationError);
}

TEST(FullHet, NeverBeatsGeneral) {
  const SystemConfig cfg = SystemConfig::with_classes(3, {1.5, 1.0, 0.5}, {0.2, 0.5, 0.3},
                                                      {1, 0.5, 1.0});
  const double fh = optimum(cfg, Formulation::full_het);
  EXPECT_GE(fh + 1e-9, optimum(cfg, Formulation::general));
  const SolvedProblem s = solve_problem(build_full_het(cfg));
  EXPECT_NEAR(expected_rate(cfg, s.placement).expected_rate, fh, 1e-9);
}

// Closed-form objective of every grouped program against exhaustive
// evaluation of the expanded placement, on random points that satisfy the
// program's constraints.
class ObjectiveIdentity : public ::testing::TestWithParam<Formulation> {};

TEST_P(ObjectiveIdentity, MatchesEnumeration) {
  const Formulation f = GetParam();
  Rng rng(1234 + static_cast<int>(f));
  for (int trial = 0; trial < 40; ++trial) {
    const int K = rng.integer(2, 4);
    const int N = rng.integer(1, 4);
    const int ks = rng.integer(1, K - 1);
    const testing::GroupedPoint pt = testing::random_grouped_point(rng, f, K, N, ks);
    const BuiltProblem bp = build(pt.cfg, f);
    const Eigen::VectorXd x = from_grouped(bp, pt.scheme);
    const ResidualReport r = check_solution(bp.lp, x, 1e-9);
    ASSERT_TRUE(r.feasible()) << "trial " << trial << ": " << r.worst;
    const Placement pl = expand_to_placement(pt.cfg, pt.scheme);
    EXPECT_NEAR(objective_value(bp, x), expected_rate(pt.cfg, pl).expected_rate, 1e-9)
        << "trial " << trial << " K=" << K << " N=" << N << " K_S=" << ks;
  }
}

INSTANTIATE_TEST_SUITE_P(Grouped, ObjectiveIdentity,
                         ::testing::Values(Formulation::homogeneous, Formulation::simplex_form,
                                           Formulation::popularity_first,
                                           Formulation::length_first, Formulation::two_tier,
                                           Formulation::full_het),
                         [](const auto& info) {
                           std::string name = to_string(info.param);
                           for (char& c : name) c = c == '-' ? '_' : c;
                           return name;
                         });

TEST(ObjectiveIdentityGeneral, EpigraphAtMaxima) {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = rng.integer(1, 3);
    const int N = rng.integer(1, 3);
    SystemConfig cfg(K, testing::random_lengths(rng, N), testing::random_popularities(rng, N),
                     std::vector<double>(K, 0.0));
    const Placement pl = testing::random_placement(rng, cfg);
    cfg = cfg.with_cache_sizes(testing::used_memory(pl));
    const BuiltProblem bp = build_general(cfg);
    const Eigen::VectorXd x = from_placement(bp, pl);
    EXPECT_TRUE(check_solution(bp.lp, x, 1e-9).feasible());
    EXPECT_NEAR(objective_value(bp, x), expected_rate(cfg, pl).expected_rate, 1e-9);
  }
}

TEST(Conversions, GroupedRoundTrip) {
  Rng rng(5);
  for (Formulation f : {Formulation::homogeneous, Formulation::simplex_form,
                        Formulation::popularity_first, Formulation::length_first,
                        Formulation::two_tier, Formulation::full_het}) {
    const testing::GroupedPoint pt = testing::random_grouped_point(rng, f, 4, 3, 2);
    const BuiltProblem bp = build(pt.cfg, f);
    const GroupedScheme back = to_grouped(bp, from_grouped(bp, pt.scheme));
    EXPECT_TRUE(back.small().isApprox(pt.scheme.small(), 1e-12) ||
                (back.small() - pt.scheme.small()).norm() < 1e-12)
        << to_string(f);
  }
  const BuiltProblem general = build_general(SystemConfig::uniform(2, 2, 1));
  EXPECT_THROW(to_grouped(general, Eigen::VectorXd::Zero(general.lp.num_vars())),
               ValidationError);
}

TEST(Conversions, PlacementRoundTrip) {
  Rng rng(6);
  const SystemConfig cfg(3, {1.0, 0.5}, {0.3, 0.7}, {2.0, 2.0, 2.0});
  const Placement pl = testing::random_placement(rng, cfg);
  const BuiltProblem bp = build_general(cfg);
  const Placement back = to_placement(bp, from_placement(bp, pl));
  EXPECT_LT((back.sizes() - pl.sizes()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SolveOptions, PricingFollowsSize) {
  EXPECT_EQ(default_solve_options(build_homogeneous(SystemConfig::uniform(3, 3, 1))).pricing,
            Pricing::bland);
  EXPECT_EQ(default_solve_options(build_general(SystemConfig::uniform(4, 4, 1))).pricing,
            Pricing::dantzig);
}

}  // namespace
}  // namespace cachecraft
