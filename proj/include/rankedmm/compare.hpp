#pragma once

// Dvoretzky-Kiefer-Wolfowitz goodness of fit between an empirical survival
// curve and the exact law: the sup distance between the two curves against
// the distribution-free threshold sqrt(ln(2/alpha) / (2n)).

#include <cmath>
#include <cstdint>
#include <vector>

#include "rankedmm/model.hpp"
#include "rankedmm/survival.hpp"

namespace rankedmm {

struct ComparisonReport {
  double statistic = 0.0;  // sup_l |empirical[l] - exact survival[l]|
  double threshold = 0.0;
  double alpha = 0.0;
  std::int64_t n = 0;
  int argmax_l = 0;
  bool verdict = false;  // statistic <= threshold
};

inline double dkw_threshold(double alpha, std::int64_t n) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

// The shorter curve is extended with its final value (an empirical curve ends
// at 0, the exact one at its residual tail mass).
inline ComparisonReport compare(const std::vector<double>& empirical,
                                const SurvivalTable& exact, double alpha,
                                std::int64_t n) {
  if (empirical.empty()) throw param_error("empirical curve must be nonempty");
  if (n < 1) throw param_error("sample count must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw param_error("alpha must lie in (0, 1)");
  ComparisonReport report;
  report.alpha = alpha;
  report.n = n;
  report.threshold = dkw_threshold(alpha, n);
  const std::size_t len = std::max(empirical.size(), exact.survival.size());
  for (std::size_t l = 0; l < len; ++l) {
    const double emp = l < empirical.size() ? empirical[l] : empirical.back();
    const double ref = l < exact.survival.size() ? exact.survival[l] : exact.survival.back();
    const double dist = std::abs(emp - ref);
    if (dist > report.statistic) {
      report.statistic = dist;
      report.argmax_l = static_cast<int>(l);
    }
  }
  report.verdict = report.statistic <= report.threshold;
  return report;
}

}  // namespace rankedmm
