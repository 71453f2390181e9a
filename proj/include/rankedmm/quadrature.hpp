#pragma once

// Independent quadrature oracle for the integral form
//
//   D_l = int_0^inf (1 + x/lambda)^l e^{-x} dx.
//
// The integrand is a degree-l polynomial against the e^{-x} weight, so an
// n-node Gauss-Laguerre rule with 2n-1 >= l reproduces D_l up to rounding.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankedmm/model.hpp"

namespace rankedmm {

struct GaussLaguerreRule {
  int n = 0;
  std::vector<double> node;
  std::vector<double> weight;

  static GaussLaguerreRule make(int n);

  // Pr[L > l] via the integral representation of D_l.
  double survival(const ModelParams& params, int l) const;
};

// Roots of L_n by Newton iteration on the three-term recurrence, with the
// usual Stroud-Secrest starting guesses. Weights use w_i = x_i / (n L_{n-1}(x_i))^2.
inline GaussLaguerreRule GaussLaguerreRule::make(int n) {
  if (n < 1) throw param_error("Gauss-Laguerre rule needs n >= 1");
  GaussLaguerreRule rule;
  rule.n = n;
  rule.node.resize(static_cast<std::size_t>(n));
  rule.weight.resize(static_cast<std::size_t>(n));
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * n);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * n);
    } else {
      const double ai = i - 1;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.node[static_cast<std::size_t>(i) - 2]);
    }
    double p1 = 1.0;
    double p2 = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      p1 = 1.0;
      p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
      }
      const double deriv = n * (p1 - p2) / z;  // L_n'(z) at the current iterate
      const double z1 = z;
      z = z1 - p1 / deriv;
      if (std::abs(z - z1) <= 1e-14 * std::max(1.0, std::abs(z1))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw std::runtime_error("Gauss-Laguerre Newton iteration failed at n = " +
                               std::to_string(n));
    }
    rule.node[static_cast<std::size_t>(i)] = z;
    const double scaled = static_cast<double>(n) * p2;  // p2 = L_{n-1}(root)
    rule.weight[static_cast<std::size_t>(i)] = z / (scaled * scaled);
  }
  return rule;
}

inline double GaussLaguerreRule::survival(const ModelParams& params, int l) const {
  if (l < 0) throw param_error("l must be >= 0, got " + std::to_string(l));
  if (2 * n - 1 < l) {
    throw param_error("rule of " + std::to_string(n) +
                      " nodes cannot integrate a degree-" + std::to_string(l) +
                      " integrand exactly");
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += weight[static_cast<std::size_t>(i)] *
           std::pow(1.0 + node[static_cast<std::size_t>(i)] / params.lambda, l);
  }
  if (!std::isfinite(sum)) return 0.0;
  return 1.0 / sum;
}

// One-shot oracle. n_nodes >= l/2 + 1 guarantees the quadrature is exact for
// the degree-l integrand; anything smaller is rejected rather than returning
// an uncertified value.
inline double survival_integral(const ModelParams& params, int l, int n_nodes) {
  if (l < 0) throw param_error("l must be >= 0, got " + std::to_string(l));
  if (n_nodes < l / 2 + 1) {
    throw param_error("n_nodes = " + std::to_string(n_nodes) +
                      " below the certification threshold l/2 + 1 = " +
                      std::to_string(l / 2 + 1));
  }
  return GaussLaguerreRule::make(n_nodes).survival(params, l);
}

}  // namespace rankedmm
