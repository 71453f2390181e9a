#include "rankedmm/survival.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace rankedmm {
namespace {

TEST(SurvivalTable, LowOrderValues) {
  const auto table = build_survival_table(ModelParams(2.0), 2);
  EXPECT_EQ(table.d[0], 1.0);
  EXPECT_EQ(table.survival[0], 1.0);
  EXPECT_DOUBLE_EQ(table.d[1], 1.5);
  EXPECT_DOUBLE_EQ(table.d[2], 2.5);
  EXPECT_DOUBLE_EQ(table.survival[2], 0.4);

  const auto unit = build_survival_table(ModelParams(1.0), 1);
  EXPECT_DOUBLE_EQ(unit.d[1], 2.0);
  EXPECT_DOUBLE_EQ(unit.survival[1], 0.5);

  // lambda = 3, l = 2: D_2 = 17/9 by direct summation, survival 9/17
  const auto three = build_survival_table(ModelParams(3.0), 2);
  EXPECT_NEAR(three.survival[2], 9.0 / 17.0, 1e-15);
}

// At lambda = 1 the recursion is d_l = l d_{l-1} + 1 over integers, so the
// first entries are exact.
TEST(SurvivalTable, IntegerSequenceAtUnitLoad) {
  const auto table = build_survival_table(ModelParams(1.0), 6);
  const double expected[] = {1, 2, 5, 16, 65, 326, 1957};
  for (int l = 0; l <= 6; ++l) EXPECT_EQ(table.d[l], expected[l]) << "l=" << l;
}

TEST(SurvivalTable, ParameterValidation) {
  EXPECT_THROW(ModelParams(0.0), param_error);
  EXPECT_THROW(ModelParams(-2.0), param_error);
  EXPECT_THROW(ModelParams(std::nan("")), param_error);
  EXPECT_THROW(ModelParams(std::numeric_limits<double>::infinity()), param_error);
  EXPECT_THROW(build_survival_table(ModelParams(1.0), -1), param_error);
}

TEST(SurvivalTable, OverflowTurnsIntoExactZeroSurvival) {
  const auto table = build_survival_table(ModelParams(0.5), 300);
  ASSERT_GT(table.overflow_l, 0);
  ASSERT_LE(table.overflow_l, 300);
  const auto at = static_cast<std::size_t>(table.overflow_l);
  EXPECT_TRUE(std::isfinite(table.d[at - 1]));
  EXPECT_GT(table.survival[at - 1], 0.0);
  for (std::size_t l = at; l < table.d.size(); ++l) {
    EXPECT_TRUE(std::isinf(table.d[l]));
    EXPECT_EQ(table.survival[l], 0.0);
  }
}

TEST(SurvivalTable, MonotoneAndNormalized) {
  for (double lambda : {0.5, 1.0, 3.0, 10.0, 100.0}) {
    const ModelParams params(lambda);
    const auto table = build_survival_table(params, default_l_max(params));
    double pmf_total = 0.0;
    for (int l = 1; l <= table.l_max; ++l) {
      if (table.overflow_l < 0 || l < table.overflow_l) {
        EXPECT_GT(table.d[l], table.d[l - 1]) << "lambda=" << lambda << " l=" << l;
        EXPECT_LT(table.survival[l], table.survival[l - 1])
            << "lambda=" << lambda << " l=" << l;
      }
      EXPECT_GE(pmf(table, l), 0.0);
      EXPECT_GT(table.survival[l - 1], 0.0);
      EXPECT_LE(table.survival[l - 1], 1.0);
      pmf_total += pmf(table, l);
    }
    EXPECT_NEAR(pmf_total + table.survival[table.l_max], 1.0, 1e-12)
        << "lambda=" << lambda;
  }
}

TEST(SurvivalTable, SurvivalTimesDenominatorIsOne) {
  const auto table = build_survival_table(ModelParams(7.5), 60);
  for (int l = 0; l <= table.l_max; ++l) {
    EXPECT_NEAR(table.survival[l] * table.d[l], 1.0, 1e-12);
  }
}

// Heavier traffic pushes arrivals deeper: survival is nondecreasing in lambda
// at fixed l.
TEST(SurvivalTable, SurvivalMonotoneInLoad) {
  const double grid[] = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  for (std::size_t i = 1; i < std::size(grid); ++i) {
    const auto lighter = build_survival_table(ModelParams(grid[i - 1]), 20);
    const auto heavier = build_survival_table(ModelParams(grid[i]), 20);
    for (int l = 1; l <= 20; ++l) {
      EXPECT_GE(heavier.survival[l], lighter.survival[l])
          << "lambda " << grid[i - 1] << "->" << grid[i] << " l=" << l;
    }
  }
}

TEST(SurvivalDirect, MatchesExamplesAndRecursion) {
  EXPECT_DOUBLE_EQ(survival_direct(ModelParams(1.0), 2), 0.2);  // D_2 = 5
  EXPECT_EQ(survival_direct(ModelParams(0.37), 0), 1.0);
  EXPECT_EQ(survival_direct(ModelParams(42.0), 0), 1.0);

  const ModelParams params(10.0);
  const auto table = build_survival_table(params, 5);
  EXPECT_NEAR(survival_direct(params, 5), table.survival[5], 1e-12 * table.survival[5]);

  for (double lambda : {0.5, 3.0, 10.0}) {
    const ModelParams p(lambda);
    const int l_max = static_cast<int>(lambda + 10.0 * std::sqrt(lambda) + 20.0);
    const auto t = build_survival_table(p, l_max);
    for (int l = 0; l <= l_max; ++l) {
      EXPECT_NEAR(survival_direct(p, l), t.survival[l], 1e-11 * t.survival[l])
          << "lambda=" << lambda << " l=" << l;
    }
  }
}

TEST(Pmf, ValuesAndRangeChecks) {
  const auto unit = build_survival_table(ModelParams(1.0), 3);
  EXPECT_DOUBLE_EQ(pmf(unit, 1), 0.5);

  const auto table = build_survival_table(ModelParams(2.0), 2);
  EXPECT_NEAR(pmf(table, 2), 4.0 / 15.0, 1e-15);  // 2/3 - 2/5

  EXPECT_THROW(pmf(table, 0), param_error);
  EXPECT_THROW(pmf(table, 3), param_error);
}

}  // namespace
}  // namespace rankedmm
