#pragma once

// Exact equilibrium law of L, the index of the server engaged by an arrival:
// Pr[L > l] is the probability that servers 1..l are all busy, which is the
// Erlang loss probability 1/D_l with
//
//   D_l = sum_{0 <= k <= l} l! / ((l-k)! lambda^k).

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rankedmm/model.hpp"

namespace rankedmm {

// d[l] = D_l and survival[l] = Pr[L > l] = 1/D_l for l = 0..l_max.
// Immutable after construction; safe to share across threads.
struct SurvivalTable {
  double lambda = 0.0;
  int l_max = 0;
  std::vector<double> d;         // D_0..D_{l_max}; +inf from the overflow index on
  std::vector<double> survival;  // Pr[L>0]..Pr[L>l_max]; exact 0 past the overflow index
  int overflow_l = -1;           // first l where D_l left the double range, -1 if none

  double pr_greater(int l) const { return survival.at(static_cast<std::size_t>(l)); }
};

// Builds the table by the forward recursion
//
//   D_0 = 1,   D_l = 1 + (l/lambda) * D_{l-1},
//
// which sums the same series with every term positive (no cancellation) and
// without the factorials that overflow the closed form early. Once D_l does
// leave the double range the true survival is below 1e-300, so survival is
// recorded as exact zero and the index is kept in overflow_l.
inline SurvivalTable build_survival_table(const ModelParams& params, int l_max) {
  if (l_max < 0) {
    throw param_error("l_max must be >= 0, got " + std::to_string(l_max));
  }
  SurvivalTable table;
  table.lambda = params.lambda;
  table.l_max = l_max;
  table.d.reserve(static_cast<std::size_t>(l_max) + 1);
  table.survival.reserve(static_cast<std::size_t>(l_max) + 1);
  double d = 1.0;
  table.d.push_back(1.0);
  table.survival.push_back(1.0);
  for (int l = 1; l <= l_max; ++l) {
    d = 1.0 + (static_cast<double>(l) / params.lambda) * d;
    if (std::isfinite(d)) {
      table.d.push_back(d);
      table.survival.push_back(1.0 / d);
    } else {
      if (table.overflow_l < 0) table.overflow_l = l;
      d = std::numeric_limits<double>::infinity();
      table.d.push_back(d);
      table.survival.push_back(0.0);
    }
  }
  return table;
}

// Reference oracle: evaluates D_l by literal summation of the defining
// series. Terms are generated left to right (t_0 = 1, t_k = t_{k-1}(l-k+1)/lambda)
// but accumulated from k = l down to 0, smallest first, to bound rounding.
// Returns Pr[L > l].
inline double survival_direct(const ModelParams& params, int l) {
  if (l < 0) throw param_error("l must be >= 0, got " + std::to_string(l));
  std::vector<double> terms(static_cast<std::size_t>(l) + 1);
  terms[0] = 1.0;
  for (int k = 1; k <= l; ++k) {
    terms[static_cast<std::size_t>(k)] =
        terms[static_cast<std::size_t>(k) - 1] *
        (static_cast<double>(l - k + 1) / params.lambda);
  }
  double sum = 0.0;
  for (int k = l; k >= 0; --k) sum += terms[static_cast<std::size_t>(k)];
  if (!std::isfinite(sum)) return 0.0;  // same overflow policy as the table
  return 1.0 / sum;
}

// Pr[L = l] = Pr[L > l-1] - Pr[L > l]. Nonnegative because d is increasing
// and correctly-rounded division is monotone.
inline double pmf(const SurvivalTable& table, int l) {
  if (l < 1 || l > table.l_max) {
    throw param_error("pmf index must be in [1, l_max], got " + std::to_string(l));
  }
  return table.survival[static_cast<std::size_t>(l) - 1] -
         table.survival[static_cast<std::size_t>(l)];
}

}  // namespace rankedmm
