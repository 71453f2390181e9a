#include "rankedmm/compare.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace rankedmm {
namespace {

TEST(DkwThreshold, MatchesFormula) {
  EXPECT_NEAR(dkw_threshold(0.001, 1000000), 0.0019494746035204052, 1e-12);
  EXPECT_NEAR(dkw_threshold(0.05, 100), std::sqrt(std::log(40.0) / 200.0), 1e-15);
}

TEST(Compare, IdenticalCurvesPass) {
  const auto table = build_survival_table(ModelParams(5.0), 40);
  const auto report = compare(table.survival, table, 0.001, 1000);
  EXPECT_EQ(report.statistic, 0.0);
  EXPECT_TRUE(report.verdict);
  EXPECT_EQ(report.n, 1000);
  EXPECT_EQ(report.alpha, 0.001);
}

TEST(Compare, PlateauShiftFailsAtModerateSampleCounts) {
  const auto table = build_survival_table(ModelParams(5.0), 40);
  std::vector<double> shifted = table.survival;
  for (double& v : shifted) v = std::min(1.0, v + 0.1);
  const auto report = compare(shifted, table, 0.001, 500);
  EXPECT_GE(report.statistic, 0.1);
  EXPECT_LT(report.threshold, 0.1);  // sqrt(ln(2000)/1000) ~ 0.087
  EXPECT_FALSE(report.verdict);
}

TEST(Compare, ShorterCurveExtendsWithTailValue) {
  const auto table = build_survival_table(ModelParams(5.0), 40);
  // empirical curve that died at l = 2: beyond it the empirical survival is 0
  const std::vector<double> empirical = {1.0, table.survival[1], 0.0};
  const auto report = compare(empirical, table, 0.001, 100);
  // largest gap is against the exact survival at the first dead index
  EXPECT_EQ(report.argmax_l, 2);
  EXPECT_NEAR(report.statistic, table.survival[2], 1e-15);

  // exact table shorter than the empirical curve: its tail value extends
  const auto stub = build_survival_table(ModelParams(5.0), 1);
  const std::vector<double> longer = {1.0, stub.survival[1], stub.survival[1], 0.1};
  const auto r2 = compare(longer, stub, 0.001, 100);
  EXPECT_NEAR(r2.statistic, stub.survival[1] - 0.1, 1e-15);
  EXPECT_EQ(r2.argmax_l, 3);
}

TEST(Compare, ValidatesInputs) {
  const auto table = build_survival_table(ModelParams(5.0), 10);
  EXPECT_THROW(compare({}, table, 0.001, 10), param_error);
  EXPECT_THROW(compare({1.0}, table, 0.0, 10), param_error);
  EXPECT_THROW(compare({1.0}, table, 1.0, 10), param_error);
  EXPECT_THROW(compare({1.0}, table, 0.5, 0), param_error);
}

}  // namespace
}  // namespace rankedmm
