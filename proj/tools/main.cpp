// Command-line surface over the exact, asymptotic, and simulation machinery.
//
// Exit codes: 0 success, 1 usage error, 2 numerical-capacity error,
// 3 failed statistical or dominance check (check-style subcommands only:
// compare, tail-check, body-check, sweep, uniform-check).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rankedmm/asymptotics.hpp"
#include "rankedmm/compare.hpp"
#include "rankedmm/io.hpp"
#include "rankedmm/model.hpp"
#include "rankedmm/moments.hpp"
#include "rankedmm/simulator.hpp"
#include "rankedmm/survival.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kCapacity = 2;
constexpr int kCheckFailed = 3;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  file << text;
  file.flush();
  if (!file) throw std::runtime_error("failed to write " + out_path);
}

std::string dump(const ordered_json& report) { return report.dump(2) + "\n"; }

int run_exact_survival(double lambda, int l_max, const std::string& format,
                       const std::string& out_path) {
  const rankedmm::ModelParams params(lambda);
  const rankedmm::SurvivalTable table = rankedmm::build_survival_table(params, l_max);
  if (format == "csv") {
    std::ostringstream csv;
    rankedmm::emit_survival_csv(table, csv);
    write_output(csv.str(), out_path);
  } else {
    ordered_json report;
    report["command"] = "exact-survival";
    report["lambda"] = table.lambda;
    report["l_max"] = table.l_max;
    report["overflow_l"] = table.overflow_l;
    report["d"] = table.d;
    report["survival"] = table.survival;
    write_output(dump(report), out_path);
  }
  return kOk;
}

int run_exact_moments(double lambda, int m, double eps, const std::string& out_path) {
  const rankedmm::ModelParams params(lambda);
  const auto by_parts =
      rankedmm::exact_moment(params, m, eps, rankedmm::MomentMethod::partial_summation);
  const auto by_pmf =
      rankedmm::exact_moment(params, m, eps, rankedmm::MomentMethod::direct_pmf);
  ordered_json report;
  report["command"] = "exact-moments";
  report["lambda"] = lambda;
  report["m"] = m;
  report["eps"] = eps;
  for (const auto& r : {by_parts, by_pmf}) {
    ordered_json entry;
    entry["exact"] = r.exact;
    entry["l_cut"] = r.l_cut;
    entry["truncation_bound"] = r.truncation_bound;
    report[rankedmm::to_string(r.method)] = entry;
  }
  report["relative_gap"] =
      std::abs(by_parts.exact - by_pmf.exact) / std::abs(by_parts.exact);
  write_output(dump(report), out_path);
  return kOk;
}

int run_asym(double lambda, int m, const std::string& out_path) {
  const rankedmm::ModelParams params(lambda);
  const auto expansion = rankedmm::moment_expansion(params, m);
  ordered_json report;
  report["command"] = "asym";
  report["lambda"] = lambda;
  report["m"] = m;
  report["leading"] = expansion.leading;
  report["second"] = expansion.second;
  report["value"] = expansion.value;
  report["variance_expansion"] = rankedmm::variance_expansion(params);
  write_output(dump(report), out_path);
  return kOk;
}

int run_tail_check(double lambda, const std::string& out_path) {
  const rankedmm::ModelParams params(lambda);
  const rankedmm::BodyTailSplit split(params);
  const int l_from = static_cast<int>(std::ceil(split.l0));
  const int l_to = static_cast<int>(std::floor(lambda + 20.0 * split.s));
  const rankedmm::SurvivalTable table = rankedmm::build_survival_table(params, l_to);
  int violations = 0;
  double max_ratio = 0.0;
  int argmax_l = l_from;
  for (int l = std::max(l_from, 0); l <= l_to; ++l) {
    const double bound = rankedmm::tail_bound(params, l);
    const double survival = table.survival[static_cast<std::size_t>(l)];
    if (survival > bound) ++violations;
    const double ratio = survival / bound;
    if (ratio > max_ratio) {
      max_ratio = ratio;
      argmax_l = l;
    }
  }
  ordered_json report;
  report["command"] = "tail-check";
  report["lambda"] = lambda;
  report["l_from"] = std::max(l_from, 0);
  report["l_to"] = l_to;
  report["violations"] = violations;
  report["max_ratio"] = max_ratio;
  report["argmax_l"] = argmax_l;
  report["pass"] = violations == 0;
  write_output(dump(report), out_path);
  return violations == 0 ? kOk : kCheckFailed;
}

// Pointwise error envelope for the body estimate; the constant 10 is the
// calibrated stand-in for the unspecified error constants.
constexpr double kBodyEnvelopeConstant = 10.0;

int run_body_check(double lambda, const std::string& out_path) {
  const rankedmm::ModelParams params(lambda);
  const rankedmm::BodyTailSplit split(params);
  const int l_to = static_cast<int>(std::floor(split.l0));
  if (l_to < 0) throw rankedmm::param_error("body region is empty for lambda <= 1");
  const rankedmm::SurvivalTable table = rankedmm::build_survival_table(params, l_to);
  double max_error = 0.0;
  double max_ratio = 0.0;
  int argmax_l = 0;
  for (int l = 0; l <= l_to; ++l) {
    const double error = std::abs(rankedmm::body_estimate(params, l) -
                                  table.survival[static_cast<std::size_t>(l)]);
    const double gap = 1.0 - l / lambda;
    const double envelope = 1.0 / lambda + 1.0 / (lambda * lambda * gap * gap * gap);
    const double ratio = error / envelope;
    max_error = std::max(max_error, error);
    if (ratio > max_ratio) {
      max_ratio = ratio;
      argmax_l = l;
    }
  }
  const bool pass = max_ratio <= kBodyEnvelopeConstant;
  ordered_json report;
  report["command"] = "body-check";
  report["lambda"] = lambda;
  report["l0"] = split.l0;
  report["max_abs_error"] = max_error;
  report["max_envelope_ratio"] = max_ratio;
  report["argmax_l"] = argmax_l;
  report["envelope_constant"] = kBodyEnvelopeConstant;
  report["pass"] = pass;
  write_output(dump(report), out_path);
  return pass ? kOk : kCheckFailed;
}

ordered_json sim_result_json(const rankedmm::SimConfig& config,
                             const rankedmm::SimResult& result) {
  ordered_json report;
  report["lambda"] = config.lambda;
  report["seed"] = config.seed;
  report["warmup_time"] = config.warmup_time;
  report["n_samples"] = config.n_samples;
  report["n_replications"] = config.n_replications;
  report["samples_recorded"] = result.samples_recorded;
  report["sample_mean_L"] = result.sample_mean_L;
  report["sample_var_L"] = result.sample_var_L;
  report["arrival_epoch_busy_mean"] = result.arrival_epoch_busy_mean;
  report["arrival_epoch_busy_var"] = result.arrival_epoch_busy_var;
  report["first_half_mean_L"] = result.first_half_mean_L;
  report["second_half_mean_L"] = result.second_half_mean_L;
  report["n_batches"] = result.n_batches;
  report["sample_mean_L_se"] = result.sample_mean_L_se;
  report["busy_mean_se"] = result.busy_mean_se;
  report["busy_var_se"] = result.busy_var_se;
  report["half_mean_pooled_se"] = result.half_mean_pooled_se;
  report["empirical_survival"] = result.empirical_survival;
  return report;
}

int run_simulate(const rankedmm::SimConfig& config, const std::string& out_path) {
  const rankedmm::SimResult result = rankedmm::run(config);
  ordered_json report;
  report["command"] = "simulate";
  report.update(sim_result_json(config, result));
  const auto checks = rankedmm::equilibrium_checks(result, config.lambda);
  ordered_json eq;
  eq["busy_mean_deviation_se"] = checks.busy_mean_deviation;
  eq["busy_var_deviation_se"] = checks.busy_var_deviation;
  eq["half_mean_deviation_se"] = checks.half_mean_deviation;
  eq["pasta_mean_ok"] = checks.pasta_mean_ok;
  eq["pasta_var_ok"] = checks.pasta_var_ok;
  eq["stationarity_ok"] = checks.stationarity_ok;
  report["equilibrium_checks"] = eq;
  write_output(dump(report), out_path);
  return kOk;
}

int run_compare(double lambda, std::int64_t n_samples, double alpha, std::uint64_t seed,
                const std::string& out_path) {
  rankedmm::SimConfig config;
  config.lambda = lambda;
  config.seed = seed;
  config.warmup_time = 50.0;
  config.n_samples = n_samples;
  config.n_replications = 1;
  const rankedmm::SimResult result = rankedmm::run(config);
  const rankedmm::ModelParams params(lambda);
  const rankedmm::SurvivalTable table =
      rankedmm::build_survival_table(params, rankedmm::default_l_max(params));
  const rankedmm::ComparisonReport comparison =
      rankedmm::compare(result.empirical_survival, table, alpha, result.samples_recorded);
  ordered_json report;
  report["command"] = "compare";
  report["lambda"] = lambda;
  report["seed"] = seed;
  report["warmup_time"] = config.warmup_time;
  report["n_samples"] = n_samples;
  report["alpha"] = alpha;
  report["statistic"] = comparison.statistic;
  report["threshold"] = comparison.threshold;
  report["n"] = comparison.n;
  report["argmax_l"] = comparison.argmax_l;
  report["verdict"] = comparison.verdict;
  write_output(dump(report), out_path);
  return comparison.verdict ? kOk : kCheckFailed;
}

constexpr double kResidualWidthBound = 0.5;

int run_sweep(const std::vector<double>& lambdas, int m, double eps,
              const std::string& out_path) {
  const rankedmm::ResidualSweep sweep = rankedmm::residual_sweep(lambdas, m, eps);
  std::ostringstream table;
  table << "# exact Ex[L^m] vs two-term expansion (log = natural)\n";
  table << "# m = " << m << "\n";
  table << "# lambda exact expansion residual\n";
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const rankedmm::ModelParams params(lambdas[i]);
    const double exact = rankedmm::exact_moment(params, m, eps).exact;
    const double expansion = rankedmm::moment_expansion(params, m).value;
    table << rankedmm::format_double(lambdas[i]) << ' ' << rankedmm::format_double(exact)
          << ' ' << rankedmm::format_double(expansion) << ' '
          << rankedmm::format_double(sweep.residuals[i]) << "\n";
  }
  const double width = sweep.width();
  const bool pass = width < kResidualWidthBound;
  table << "# residual width = " << rankedmm::format_double(width) << " (bound "
        << rankedmm::format_double(kResidualWidthBound) << "): " << (pass ? "PASS" : "FAIL")
        << "\n";
  write_output(table.str(), out_path);
  return pass ? kOk : kCheckFailed;
}

int run_uniform_check(const std::vector<double>& lambdas, const std::string& out_path) {
  if (lambdas.empty()) throw rankedmm::param_error("need at least one lambda");
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (lambdas[i] <= lambdas[i - 1]) {
      throw rankedmm::param_error("lambdas must be strictly increasing");
    }
  }
  std::ostringstream table;
  table << "# sup_l |Pr[L>l] - max(0, 1 - l/lambda)|\n";
  table << "# lambda sup_distance\n";
  std::vector<double> distances;
  for (double lambda : lambdas) {
    const double distance = rankedmm::uniform_limit_distance(rankedmm::ModelParams(lambda));
    distances.push_back(distance);
    table << rankedmm::format_double(lambda) << ' ' << rankedmm::format_double(distance)
          << "\n";
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < distances.size(); ++i) {
    if (distances[i] >= distances[i - 1]) decreasing = false;
  }
  table << "# strictly decreasing: " << (decreasing ? "PASS" : "FAIL") << "\n";
  write_output(table.str(), out_path);
  return decreasing ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Equilibrium law of the lowest idle ranked server in an M/M/inf system: "
      "exact tables, heavy-traffic estimates, and simulation checks. "
      "All logarithms are natural."};
  app.require_subcommand(1);
  int rc = kOk;

  double lambda = 0.0;
  int l_max = 0;
  int m = 1;
  double eps = 1e-10;
  double alpha = 0.001;
  std::uint64_t seed = 0;
  double warmup = 50.0;
  std::int64_t n_samples = 0;
  int reps = 1;
  std::string format = "csv";
  std::string out_path;
  std::vector<double> lambdas;

  auto* exact_survival =
      app.add_subcommand("exact-survival", "Exact D_l and Pr[L>l] for l = 0..lmax");
  exact_survival->add_option("--lambda", lambda, "offered load")->required();
  exact_survival->add_option("--lmax", l_max, "largest l")->required();
  exact_survival->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  exact_survival->add_option("--out", out_path, "write to file instead of stdout");
  exact_survival->callback([&]() { rc = run_exact_survival(lambda, l_max, format, out_path); });

  auto* exact_moments = app.add_subcommand(
      "exact-moments", "Ex[L^m] by partial summation and by direct pmf summation");
  exact_moments->add_option("--lambda", lambda, "offered load")->required();
  exact_moments->add_option("--m", m, "moment order (0..6)")->required();
  exact_moments->add_option("--eps", eps, "relative truncation tolerance");
  exact_moments->add_option("--out", out_path, "write to file instead of stdout");
  exact_moments->callback([&]() { rc = run_exact_moments(lambda, m, eps, out_path); });

  auto* asym = app.add_subcommand(
      "asym", "Two-term expansion lambda^m/(m+1) + m lambda^(m-1) ln(lambda)/2");
  asym->add_option("--lambda", lambda, "offered load")->required();
  asym->add_option("--m", m, "moment order (>= 1)")->required();
  asym->add_option("--out", out_path, "write to file instead of stdout");
  asym->callback([&]() { rc = run_asym(lambda, m, out_path); });

  auto* tail_check = app.add_subcommand(
      "tail-check", "Verify exact survival <= e^7 e^-lambda lambda^l / l! over the tail");
  tail_check->add_option("--lambda", lambda, "offered load (>= 9)")->required();
  tail_check->add_option("--out", out_path, "write to file instead of stdout");
  tail_check->callback([&]() { rc = run_tail_check(lambda, out_path); });

  auto* body_check = app.add_subcommand(
      "body-check", "Verify the body estimate stays inside its error envelope");
  body_check->add_option("--lambda", lambda, "offered load (> 1)")->required();
  body_check->add_option("--out", out_path, "write to file instead of stdout");
  body_check->callback([&]() { rc = run_body_check(lambda, out_path); });

  auto* simulate = app.add_subcommand(
      "simulate", "Sample L at post-warmup arrival epochs of the simulated chain");
  simulate->add_option("--lambda", lambda, "offered load")->required();
  simulate->add_option("--samples", n_samples, "post-warmup arrivals to record")->required();
  simulate->add_option("--warmup", warmup, "warm-up time in mean service times");
  simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--reps", reps, "independent replications (run concurrently)");
  simulate->add_option("--out", out_path, "write to file instead of stdout");
  simulate->callback([&]() {
    rankedmm::SimConfig config;
    config.lambda = lambda;
    config.seed = seed;
    config.warmup_time = warmup;
    config.n_samples = n_samples;
    config.n_replications = reps;
    rc = run_simulate(config, out_path);
  });

  auto* cmp = app.add_subcommand(
      "compare", "Simulate, then test the empirical law against the exact one (DKW)");
  cmp->add_option("--lambda", lambda, "offered load")->required();
  cmp->add_option("--samples", n_samples, "post-warmup arrivals to record")->required();
  cmp->add_option("--alpha", alpha, "DKW significance level");
  cmp->add_option("--seed", seed, "master seed");
  cmp->add_option("--out", out_path, "write to file instead of stdout");
  cmp->callback([&]() { rc = run_compare(lambda, n_samples, alpha, seed, out_path); });

  auto* sweep = app.add_subcommand(
      "sweep", "Residuals of the moment expansion over a lambda grid (gnuplot-ready)");
  sweep->add_option("--lambdas", lambdas, "comma-separated lambda grid, increasing")
      ->required()
      ->delimiter(',');
  sweep->add_option("--m", m, "moment order (>= 1)")->required();
  sweep->add_option("--eps", eps, "relative truncation tolerance");
  sweep->add_option("--out", out_path, "write to file instead of stdout");
  sweep->callback([&]() { rc = run_sweep(lambdas, m, eps, out_path); });

  auto* uniform_check = app.add_subcommand(
      "uniform-check", "Distance to the uniform limit over a lambda grid (gnuplot-ready)");
  uniform_check->add_option("--lambdas", lambdas, "comma-separated lambda grid, increasing")
      ->required()
      ->delimiter(',');
  uniform_check->add_option("--out", out_path, "write to file instead of stdout");
  uniform_check->callback([&]() { rc = run_uniform_check(lambdas, out_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const rankedmm::capacity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCapacity;
  } catch (const rankedmm::param_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const rankedmm::region_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return rc;
}
