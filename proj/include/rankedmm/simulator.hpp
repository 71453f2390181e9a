#pragma once

// Event-driven simulation of the continuous-time chain: Poisson arrivals at
// rate lambda, unit-rate exponential services, each arrival seated on the
// lowest-indexed idle server.
//
// The chain is advanced by competing exponential clocks: from a state with k
// busy servers the holding time is Exp(lambda + k), the event is an arrival
// with probability lambda/(lambda + k), and a departing server is uniform
// over the busy ones — valid because exponential services are memoryless.
//
// Equilibrium samples of L are taken at arrival epochs after warm-up; by
// PASTA these coincide with time-stationary samples. Dispersion of the
// recorded statistics is estimated by batch means, since consecutive arrivals
// see correlated states.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <string>
#include <vector>

#include "rankedmm/model.hpp"
#include "rankedmm/rng.hpp"
#include "rankedmm/server_set.hpp"

namespace rankedmm {

struct SimConfig {
  double lambda = 1.0;
  std::uint64_t seed = 0;
  double warmup_time = 50.0;    // in mean service times
  std::int64_t n_samples = 1;   // post-warmup arrivals to record
  int n_replications = 1;

  void validate() const {
    if (!std::isfinite(lambda) || lambda <= 0.0) throw param_error("lambda must be positive");
    if (!(warmup_time >= 0.0) || !std::isfinite(warmup_time)) {
      throw param_error("warmup_time must be >= 0");
    }
    if (n_samples < 1) throw param_error("n_samples must be >= 1");
    if (n_replications < 1) throw param_error("n_replications must be >= 1");
  }
};

struct SimState {
  double clock = 0.0;
  ServerSet servers;
  std::vector<int> busy_list;  // dense busy server indices
  std::vector<int> list_pos;   // server -> position in busy_list, -1 when idle

  explicit SimState(int capacity_hint = 64)
      : servers(capacity_hint),
        list_pos(static_cast<std::size_t>(servers.capacity()) + 1, -1) {}

  int busy_count() const { return static_cast<int>(busy_list.size()); }
};

inline int lowest_idle(const SimState& state) { return state.servers.lowest_idle(); }

// Seats an arrival on the lowest idle server (growing capacity on demand)
// and returns its index — the realized value of L.
inline int apply_arrival(SimState& state) {
  const int server = state.servers.lowest_idle();
  state.servers.set_busy(server);
  if (state.list_pos.size() < static_cast<std::size_t>(state.servers.capacity()) + 1) {
    state.list_pos.resize(static_cast<std::size_t>(state.servers.capacity()) + 1, -1);
  }
  state.list_pos[static_cast<std::size_t>(server)] = state.busy_count();
  state.busy_list.push_back(server);
  return server;
}

// Frees the busy server at position `pos` of the dense list (swap-remove)
// and returns its index.
inline int apply_departure(SimState& state, int pos) {
  const int server = state.busy_list[static_cast<std::size_t>(pos)];
  const int last = state.busy_list.back();
  state.busy_list[static_cast<std::size_t>(pos)] = last;
  state.list_pos[static_cast<std::size_t>(last)] = pos;
  state.busy_list.pop_back();
  state.list_pos[static_cast<std::size_t>(server)] = -1;
  state.servers.set_idle(server);
  return server;
}

struct SimEvent {
  enum class Kind { arrival, departure };
  Kind kind = Kind::arrival;
  int server = 0;  // seated server (the sample of L) for arrivals; freed server otherwise
  double dt = 0.0;
};

inline SimEvent step(SimState& state, double lambda, std::mt19937_64& rng) {
  const double rate = lambda + state.busy_count();
  SimEvent event;
  event.dt = -std::log(u01_open_closed(rng)) / rate;
  state.clock += event.dt;
  if (u01_open_closed(rng) * rate <= lambda) {
    event.kind = SimEvent::Kind::arrival;
    event.server = apply_arrival(state);
  } else {
    event.kind = SimEvent::Kind::departure;
    const int pos = static_cast<int>(
        uniform_below(rng, static_cast<std::uint64_t>(state.busy_count())));
    event.server = apply_departure(state, pos);
  }
  assert(state.servers.popcount() == state.busy_count());
  return event;
}

struct SimResult {
  std::int64_t samples_recorded = 0;
  std::vector<double> empirical_survival;  // index l: fraction of samples > l
  double sample_mean_L = 0.0;
  double sample_var_L = 0.0;
  double arrival_epoch_busy_mean = 0.0;  // busy servers seen by the arrival, excluding itself
  double arrival_epoch_busy_var = 0.0;
  double first_half_mean_L = 0.0;
  double second_half_mean_L = 0.0;
  // batch-means dispersion estimates backing the equilibrium checks
  int n_batches = 0;
  double sample_mean_L_se = std::numeric_limits<double>::quiet_NaN();
  double busy_mean_se = std::numeric_limits<double>::quiet_NaN();
  double busy_var_se = std::numeric_limits<double>::quiet_NaN();
  double half_mean_pooled_se = std::numeric_limits<double>::quiet_NaN();
};

// Survival curve of a sample set: entry[l] is the fraction of samples
// strictly greater than l, for l = 0..max(sample). Exact rational counts, so
// the curve starts at 1, never increases, and ends at 0.
inline std::vector<double> empirical_survival(const std::vector<int>& samples) {
  if (samples.empty()) throw param_error("empirical survival needs at least one sample");
  int max_value = 0;
  for (int s : samples) {
    if (s < 0) throw param_error("samples must be nonnegative");
    max_value = std::max(max_value, s);
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(max_value) + 1, 0);
  for (int s : samples) ++counts[static_cast<std::size_t>(s)];
  std::vector<double> curve(static_cast<std::size_t>(max_value) + 1);
  std::int64_t greater = static_cast<std::int64_t>(samples.size());
  for (int l = 0; l <= max_value; ++l) {
    greater -= counts[static_cast<std::size_t>(l)];
    curve[static_cast<std::size_t>(l)] =
        static_cast<double>(greater) / static_cast<double>(samples.size());
  }
  return curve;
}

namespace detail {

struct ReplicationStats {
  std::vector<std::int64_t> histogram;  // counts of recorded L values
  std::int64_t n = 0;
  double sum_l = 0.0;
  double sumsq_l = 0.0;
  double sum_busy = 0.0;
  double sumsq_busy = 0.0;
  int n_batches = 0;
  std::vector<std::int64_t> batch_count;
  std::vector<double> batch_sum_l;
  std::vector<double> batch_sum_busy;
  std::vector<double> batch_sumsq_busy;
};

inline int batch_count_for(std::int64_t n) {
  if (n >= 1024) return 64;
  if (n >= 64) return 16;
  if (n >= 8) return 4;
  if (n >= 2) return 2;
  return 1;
}

inline ReplicationStats run_replication(const SimConfig& config, int replication) {
  std::mt19937_64 rng =
      replication_stream(config.seed, static_cast<std::uint64_t>(replication));
  const int capacity_hint = static_cast<int>(
      std::ceil(config.lambda + 10.0 * std::sqrt(config.lambda)));
  SimState state(capacity_hint);
  while (state.clock < config.warmup_time) step(state, config.lambda, rng);

  ReplicationStats stats;
  stats.n = config.n_samples;
  stats.n_batches = batch_count_for(config.n_samples);
  stats.batch_count.assign(static_cast<std::size_t>(stats.n_batches), 0);
  stats.batch_sum_l.assign(static_cast<std::size_t>(stats.n_batches), 0.0);
  stats.batch_sum_busy.assign(static_cast<std::size_t>(stats.n_batches), 0.0);
  stats.batch_sumsq_busy.assign(static_cast<std::size_t>(stats.n_batches), 0.0);

  std::int64_t recorded = 0;
  while (recorded < config.n_samples) {
    const SimEvent event = step(state, config.lambda, rng);
    if (event.kind != SimEvent::Kind::arrival) continue;
    const int l = event.server;
    const double busy_seen = state.busy_count() - 1;  // excludes the arrival itself
    const auto batch = static_cast<std::size_t>(
        recorded * stats.n_batches / config.n_samples);
    if (static_cast<std::size_t>(l) >= stats.histogram.size()) {
      stats.histogram.resize(static_cast<std::size_t>(l) + 1, 0);
    }
    ++stats.histogram[static_cast<std::size_t>(l)];
    stats.sum_l += l;
    stats.sumsq_l += static_cast<double>(l) * l;
    stats.sum_busy += busy_seen;
    stats.sumsq_busy += busy_seen * busy_seen;
    ++stats.batch_count[batch];
    stats.batch_sum_l[batch] += l;
    stats.batch_sum_busy[batch] += busy_seen;
    stats.batch_sumsq_busy[batch] += busy_seen * busy_seen;
    ++recorded;
  }
  return stats;
}

inline double sample_sd(const std::vector<double>& values) {
  if (values.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace detail

// Runs the configured number of replications (concurrently when more than
// one; streams are independent, results are combined in replication order so
// scheduling cannot change the output) and aggregates equilibrium samples of L.
inline SimResult run(const SimConfig& config) {
  config.validate();
  std::vector<detail::ReplicationStats> reps;
  reps.reserve(static_cast<std::size_t>(config.n_replications));
  if (config.n_replications == 1) {
    reps.push_back(detail::run_replication(config, 0));
  } else {
    std::vector<std::future<detail::ReplicationStats>> futures;
    futures.reserve(static_cast<std::size_t>(config.n_replications));
    for (int r = 0; r < config.n_replications; ++r) {
      futures.push_back(std::async(std::launch::async, detail::run_replication, config, r));
    }
    for (auto& f : futures) reps.push_back(f.get());
  }

  SimResult result;
  std::vector<std::int64_t> histogram;
  double sum_l = 0.0, sumsq_l = 0.0, sum_busy = 0.0, sumsq_busy = 0.0;
  std::vector<double> batch_means_l, batch_means_busy, batch_vars_busy;
  std::vector<double> first_half_means, second_half_means;
  double first_sum = 0.0, second_sum = 0.0;
  std::int64_t first_n = 0, second_n = 0;
  for (const auto& rep : reps) {
    result.samples_recorded += rep.n;
    sum_l += rep.sum_l;
    sumsq_l += rep.sumsq_l;
    sum_busy += rep.sum_busy;
    sumsq_busy += rep.sumsq_busy;
    if (histogram.size() < rep.histogram.size()) histogram.resize(rep.histogram.size(), 0);
    for (std::size_t i = 0; i < rep.histogram.size(); ++i) histogram[i] += rep.histogram[i];
    for (int b = 0; b < rep.n_batches; ++b) {
      const auto bi = static_cast<std::size_t>(b);
      const double count = static_cast<double>(rep.batch_count[bi]);
      if (rep.batch_count[bi] < 1) continue;
      const double mean_l = rep.batch_sum_l[bi] / count;
      const double mean_busy = rep.batch_sum_busy[bi] / count;
      batch_means_l.push_back(mean_l);
      batch_means_busy.push_back(mean_busy);
      if (rep.batch_count[bi] >= 2) {
        batch_vars_busy.push_back(
            (rep.batch_sumsq_busy[bi] - count * mean_busy * mean_busy) / (count - 1.0));
      }
      if (rep.n_batches >= 2) {
        if (b < rep.n_batches / 2) {
          first_half_means.push_back(mean_l);
          first_sum += rep.batch_sum_l[bi];
          first_n += rep.batch_count[bi];
        } else {
          second_half_means.push_back(mean_l);
          second_sum += rep.batch_sum_l[bi];
          second_n += rep.batch_count[bi];
        }
      }
    }
    result.n_batches += rep.n_batches;
  }

  const auto n = static_cast<double>(result.samples_recorded);
  result.sample_mean_L = sum_l / n;
  result.arrival_epoch_busy_mean = sum_busy / n;
  if (result.samples_recorded >= 2) {
    result.sample_var_L = (sumsq_l - n * result.sample_mean_L * result.sample_mean_L) / (n - 1.0);
    result.arrival_epoch_busy_var =
        (sumsq_busy - n * result.arrival_epoch_busy_mean * result.arrival_epoch_busy_mean) /
        (n - 1.0);
  } else {
    result.sample_var_L = std::numeric_limits<double>::quiet_NaN();
    result.arrival_epoch_busy_var = std::numeric_limits<double>::quiet_NaN();
  }

  result.empirical_survival.resize(histogram.size() > 0 ? histogram.size() : 1, 1.0);
  std::int64_t greater = result.samples_recorded;
  for (std::size_t l = 0; l < histogram.size(); ++l) {
    greater -= histogram[l];
    result.empirical_survival[l] = static_cast<double>(greater) / n;
  }

  if (first_n > 0 && second_n > 0) {
    result.first_half_mean_L = first_sum / static_cast<double>(first_n);
    result.second_half_mean_L = second_sum / static_cast<double>(second_n);
  } else {
    result.first_half_mean_L = result.sample_mean_L;
    result.second_half_mean_L = result.sample_mean_L;
  }

  const double sd_l_means = detail::sample_sd(batch_means_l);
  result.sample_mean_L_se = sd_l_means / std::sqrt(static_cast<double>(batch_means_l.size()));
  const double sd_busy_means = detail::sample_sd(batch_means_busy);
  result.busy_mean_se = sd_busy_means / std::sqrt(static_cast<double>(batch_means_busy.size()));
  const double sd_busy_vars = detail::sample_sd(batch_vars_busy);
  result.busy_var_se = sd_busy_vars / std::sqrt(static_cast<double>(batch_vars_busy.size()));
  const double sd_first = detail::sample_sd(first_half_means);
  const double sd_second = detail::sample_sd(second_half_means);
  result.half_mean_pooled_se =
      std::sqrt(sd_first * sd_first / static_cast<double>(first_half_means.size()) +
                sd_second * sd_second / static_cast<double>(second_half_means.size()));
  return result;
}

// Four-standard-error agreement checks on a finished run: arrival-epoch busy
// counts should look Poisson(lambda) in mean and variance (PASTA), and the
// two halves of the run should agree on Ex[L] (warm-up adequacy).
struct EquilibriumChecks {
  double busy_mean_deviation = 0.0;  // |mean - lambda| in batch SEs
  double busy_var_deviation = 0.0;
  double half_mean_deviation = 0.0;  // |first - second| in pooled batch SEs
  bool pasta_mean_ok = false;
  bool pasta_var_ok = false;
  bool stationarity_ok = false;

  bool all_ok() const { return pasta_mean_ok && pasta_var_ok && stationarity_ok; }
};

inline EquilibriumChecks equilibrium_checks(const SimResult& result, double lambda,
                                            double n_se = 4.0) {
  EquilibriumChecks checks;
  checks.busy_mean_deviation =
      std::abs(result.arrival_epoch_busy_mean - lambda) / result.busy_mean_se;
  checks.busy_var_deviation =
      std::abs(result.arrival_epoch_busy_var - lambda) / result.busy_var_se;
  checks.half_mean_deviation =
      std::abs(result.first_half_mean_L - result.second_half_mean_L) /
      result.half_mean_pooled_se;
  checks.pasta_mean_ok = checks.busy_mean_deviation <= n_se;
  checks.pasta_var_ok = checks.busy_var_deviation <= n_se;
  checks.stationarity_ok = checks.half_mean_deviation <= n_se;
  return checks;
}

}  // namespace rankedmm
