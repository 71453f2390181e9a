#pragma once

// Heavy-traffic estimates for the ranked-server system, plus residual probes
// that measure them against the exact law:
//
//   body:      Pr[L>l] ~ (1 - l/lambda) + 1/(lambda(1 - l/lambda)),  l <= lambda - sqrt(lambda)
//   tail:      Pr[L>l] <= min(1, e^7 e^{-lambda} lambda^l / l!),     l >= lambda - sqrt(lambda)
//   moments:   Ex[L^m] ~ lambda^m/(m+1) + m lambda^{m-1} log(lambda)/2
//   T_n:       sum l^n Pr[L>l] ~ lambda^{n+1}/((n+1)(n+2)) + lambda^n log(lambda)/2
//
// All logarithms are natural.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rankedmm/model.hpp"
#include "rankedmm/moments.hpp"
#include "rankedmm/survival.hpp"

namespace rankedmm {

// Split point between the body and tail regimes.
struct BodyTailSplit {
  double lambda = 0.0;
  double s = 0.0;   // sqrt(lambda)
  double l0 = 0.0;  // lambda - s

  explicit BodyTailSplit(const ModelParams& params)
      : lambda(params.lambda), s(std::sqrt(params.lambda)), l0(params.lambda - s) {}
};

// Body estimate of Pr[L>l]. Error is O(1/lambda) + O(1/(lambda^2 (1-l/lambda)^3)),
// which blows up as l -> lambda, so the split is enforced rather than
// extrapolated past.
inline double body_estimate(const ModelParams& params, int l) {
  if (l < 0) throw param_error("l must be >= 0, got " + std::to_string(l));
  const BodyTailSplit split(params);
  if (static_cast<double>(l) > split.l0) {
    throw region_error("body estimate is valid only for l <= l0 = lambda - sqrt(lambda) = " +
                       std::to_string(split.l0));
  }
  const double gap = 1.0 - l / params.lambda;
  return gap + 1.0 / (params.lambda * gap);
}

// Tail bound on Pr[L>l], from the explicit denominator bound
// D_l >= l! e^lambda / (e^7 lambda^l). Evaluated in log space; the raw bound
// is vacuous near l = lambda and is capped at 1. The derivation needs
// floor(lambda - 2 sqrt(lambda)) >= 0 with some slack, enforced as lambda >= 9.
inline double tail_bound(const ModelParams& params, int l) {
  if (l < 0) throw param_error("l must be >= 0, got " + std::to_string(l));
  if (params.lambda < 9.0) {
    throw region_error("tail bound is certified only for lambda >= 9");
  }
  const BodyTailSplit split(params);
  if (static_cast<double>(l) < split.l0) {
    throw region_error("tail bound is valid only for l >= l0 = lambda - sqrt(lambda) = " +
                       std::to_string(split.l0));
  }
  const double log_raw =
      7.0 - params.lambda + l * std::log(params.lambda) - std::lgamma(l + 1.0);
  return std::min(1.0, std::exp(log_raw));
}

// Two-term expansion of Ex[L^m].
struct AsymptoticMoment {
  int m = 0;
  double leading = 0.0;  // lambda^m / (m+1)
  double second = 0.0;   // m lambda^{m-1} log(lambda) / 2
  double value = 0.0;    // leading + second
};

inline AsymptoticMoment moment_expansion(const ModelParams& params, int m) {
  if (m < 1) throw param_error("moment expansion needs m >= 1");
  AsymptoticMoment result;
  result.m = m;
  result.leading = std::pow(params.lambda, m) / (m + 1.0);
  result.second = 0.5 * std::pow(params.lambda, m - 1) * std::log(params.lambda) * m;
  result.value = result.leading + result.second;
  return result;
}

// Var[L] ~ lambda^2/12 + lambda log(lambda)/2.
inline double variance_expansion(const ModelParams& params) {
  return params.lambda * params.lambda / 12.0 +
         0.5 * params.lambda * std::log(params.lambda);
}

// Two-term expansion of T_n = sum_{l>=0} l^n Pr[L>l]. At n = 0 this equals
// moment_expansion(m = 1).value exactly as computed (T_0 = Ex[L]).
inline double t_sum_expansion(const ModelParams& params, int n) {
  if (n < 0) throw param_error("T_n expansion needs n >= 0");
  return std::pow(params.lambda, n + 1) / ((n + 1.0) * (n + 2.0)) +
         0.5 * std::pow(params.lambda, n) * std::log(params.lambda);
}

// Exact T_n, same streaming recursion and truncation certificate as
// exact_moment but with plain weights l^n.
struct TSumReport {
  int n = 0;
  double value = 0.0;
  int l_cut = 0;
  double truncation_bound = 0.0;  // relative to value
};

inline TSumReport t_sum_exact(const ModelParams& params, int n, double eps = 1e-10) {
  if (n < 0) throw param_error("T_n needs n >= 0");
  if (n > 5) throw param_error("T_n order capped at 5");
  detail::check_eps(eps);
  const double lambda = params.lambda;
  const int l_start = static_cast<int>(std::ceil(lambda + 10.0 * std::sqrt(lambda)));
  detail::CompensatedSum acc;
  double d = 1.0;
  double s = 1.0;
  for (int l = 0;; ++l) {
    if (l > 0) {
      d = 1.0 + (static_cast<double>(l) / lambda) * d;
      s = std::isfinite(d) ? 1.0 / d : 0.0;
    }
    acc.add(detail::ipow(static_cast<double>(l), n) * s);
    if (l >= l_start) {
      const double cert = detail::tail_certificate(lambda, l, s, n);
      const double value = acc.value();
      if (cert <= 0.5 * eps * value) {
        return {n, value, l, cert / value};
      }
    }
    if (l > 100000000) {
      throw capacity_error("T_n truncation did not certify below eps", detail::kEpsFloor);
    }
  }
}

// Newell's uniform approximation Pr[L>l] ~ max(0, 1 - l/lambda). Undefined in
// the source treatment exactly at l = lambda; the max form covers the boundary.
inline double newell_approximation(const ModelParams& params, int l) {
  if (l < 0) throw param_error("l must be >= 0, got " + std::to_string(l));
  return std::max(0.0, 1.0 - l / params.lambda);
}

// Kolmogorov distance between the exact survival of L and the uniform-limit
// approximation, up to the integer discretization of L. Decays like
// 1/sqrt(lambda), driven by the body correction term near l0.
inline double uniform_limit_distance(const ModelParams& params) {
  if (params.lambda < 4.0) {
    throw param_error("uniform-limit distance needs lambda >= 4");
  }
  const SurvivalTable table = build_survival_table(params, default_l_max(params));
  double sup = 0.0;
  for (int l = 0; l <= table.l_max; ++l) {
    sup = std::max(sup, std::abs(table.survival[static_cast<std::size_t>(l)] -
                                 newell_approximation(params, l)));
  }
  return sup;
}

// Residuals (exact - expansion) / lambda^{m-1} over a lambda grid: the probe
// for the bounded next-order term. What the bounded sequence converges to, if
// anything, is recorded but never asserted.
struct ResidualSweep {
  int m = 0;
  std::vector<double> grid;
  std::vector<double> residuals;

  double width() const {
    const auto [lo, hi] = std::minmax_element(residuals.begin(), residuals.end());
    return residuals.empty() ? 0.0 : *hi - *lo;
  }
};

inline ResidualSweep residual_sweep(const std::vector<double>& grid, int m,
                                    double eps = 1e-10) {
  if (m < 1) throw param_error("residual sweep needs m >= 1");
  if (grid.empty()) throw param_error("residual sweep needs a nonempty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 9.0) throw param_error("residual sweep grid values must be >= 9");
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw param_error("residual sweep grid must be strictly increasing");
    }
  }
  ResidualSweep sweep;
  sweep.m = m;
  sweep.grid = grid;
  sweep.residuals.reserve(grid.size());
  for (double lambda : grid) {
    const ModelParams params(lambda);
    const double exact = exact_moment(params, m, eps).exact;
    const double expansion = moment_expansion(params, m).value;
    sweep.residuals.push_back((exact - expansion) / std::pow(lambda, m - 1));
  }
  return sweep;
}

}  // namespace rankedmm
