#include <gtest/gtest.h>

#include <string>

#include "json.hpp"

#include "cli_runner.hpp"

namespace {

using rankedmm_test::run_cli;

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run_cli("").exit_code, 1);
  EXPECT_EQ(run_cli("no-such-command").exit_code, 1);
  EXPECT_EQ(run_cli("exact-survival --lmax 2").exit_code, 1);  // missing --lambda
  EXPECT_EQ(run_cli("exact-survival --lambda 2 --lmax 2 --format xml").exit_code, 1);
  EXPECT_EQ(run_cli("exact-survival --lambda -1 --lmax 2").exit_code, 1);
  EXPECT_EQ(run_cli("sweep --lambdas 100,1000 --m 0").exit_code, 1);
  EXPECT_EQ(run_cli("uniform-check --lambdas 1000,100").exit_code, 1);
  EXPECT_EQ(run_cli("compare --lambda 50 --samples 100 --alpha 1.5").exit_code, 1);
}

TEST(Cli, HelpExitsZero) {
  const auto result = run_cli("--help");
  EXPECT_EQ(result.exit_code, 0);
  EXPECT_NE(result.output.find("exact-survival"), std::string::npos);
  EXPECT_NE(result.output.find("natural"), std::string::npos);  // log convention surfaced
}

TEST(Cli, ExactSurvivalCsv) {
  const auto result = run_cli("exact-survival --lambda 2 --lmax 2");
  EXPECT_EQ(result.exit_code, 0);
  EXPECT_EQ(result.output,
            "lambda,l,d,survival\n"
            "2,0,1,1\n"
            "2,1,1.5,0.6666666666666666\n"
            "2,2,2.5,0.4\n");
}

TEST(Cli, ExactSurvivalJson) {
  const auto result = run_cli("exact-survival --lambda 2 --lmax 2 --format json");
  EXPECT_EQ(result.exit_code, 0);
  const auto report = nlohmann::json::parse(result.output);
  EXPECT_EQ(report["lambda"], 2.0);
  EXPECT_EQ(report["l_max"], 2);
  EXPECT_EQ(report["survival"][2], 0.4);
}

TEST(Cli, AsymReportsExpansion) {
  const auto result = run_cli("asym --lambda 100 --m 1");
  EXPECT_EQ(result.exit_code, 0);
  const auto report = nlohmann::json::parse(result.output);
  EXPECT_EQ(report["lambda"], 100.0);
  EXPECT_EQ(report["m"], 1);
  EXPECT_NEAR(report["value"].get<double>(), 52.302585092994046, 1e-9);
}

TEST(Cli, ExactMomentsReportsBothRoutes) {
  const auto result = run_cli("exact-moments --lambda 10 --m 2");
  EXPECT_EQ(result.exit_code, 0);
  const auto report = nlohmann::json::parse(result.output);
  EXPECT_TRUE(report.contains("partial_summation"));
  EXPECT_TRUE(report.contains("direct_pmf"));
  EXPECT_LT(report["relative_gap"].get<double>(), 1e-10);
  EXPECT_EQ(report["eps"], 1e-10);
}

TEST(Cli, CapacityErrorExitsTwo) {
  const auto result = run_cli("exact-moments --lambda 10 --m 1 --eps 1e-18");
  EXPECT_EQ(result.exit_code, 2);
  EXPECT_NE(result.output.find("error:"), std::string::npos);
}

TEST(Cli, CheckCommandsPassOnHonestInputs) {
  EXPECT_EQ(run_cli("tail-check --lambda 100").exit_code, 0);
  EXPECT_EQ(run_cli("body-check --lambda 400").exit_code, 0);
  EXPECT_EQ(run_cli("uniform-check --lambdas 100,1000").exit_code, 0);
  const auto sweep = run_cli("sweep --lambdas 1000,10000 --m 1");
  EXPECT_EQ(sweep.exit_code, 0);
  EXPECT_NE(sweep.output.find("PASS"), std::string::npos);
  EXPECT_EQ(run_cli("sweep --lambdas 1000 --m 1").exit_code, 0);
}

TEST(Cli, FailedStatisticalCheckExitsThree) {
  // 200 samples cannot track the exact curve at the ~0.04 threshold this
  // near-1 alpha demands
  const auto result = run_cli("compare --lambda 50 --samples 200 --alpha 0.9999");
  EXPECT_EQ(result.exit_code, 3);
  const auto report = nlohmann::json::parse(result.output);
  EXPECT_FALSE(report["verdict"].get<bool>());
}

TEST(Cli, CompareAcceptsHealthySimulation) {
  const auto result = run_cli("compare --lambda 20 --samples 100000 --seed 1");
  EXPECT_EQ(result.exit_code, 0);
  const auto report = nlohmann::json::parse(result.output);
  EXPECT_TRUE(report["verdict"].get<bool>());
  EXPECT_EQ(report["alpha"], 0.001);
  EXPECT_EQ(report["n_samples"], 100000);
}

TEST(Cli, SimulateIsByteIdenticalAcrossRuns) {
  const std::string flags = "simulate --lambda 12 --samples 2000 --seed 3 --warmup 10";
  const auto first = run_cli(flags);
  const auto second = run_cli(flags);
  EXPECT_EQ(first.exit_code, 0);
  EXPECT_EQ(first.output, second.output);
  const auto report = nlohmann::json::parse(first.output);
  EXPECT_EQ(report["seed"], 3);
  EXPECT_EQ(report["samples_recorded"], 2000);
  EXPECT_EQ(report["empirical_survival"][0], 1.0);
}

TEST(Cli, SimulateWithReplicationsStaysDeterministic) {
  const std::string flags = "simulate --lambda 8 --samples 1000 --seed 5 --reps 3";
  const auto first = run_cli(flags);
  const auto second = run_cli(flags);
  EXPECT_EQ(first.exit_code, 0);
  EXPECT_EQ(first.output, second.output);
  const auto report = nlohmann::json::parse(first.output);
  EXPECT_EQ(report["samples_recorded"], 3000);
  EXPECT_EQ(report["n_replications"], 3);
}

}  // namespace
