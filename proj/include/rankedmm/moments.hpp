#pragma once

// Exact moments of L with a certified truncation error.
//
// Two routes to Ex[L^m]:
//   partial_summation:  sum_{l>=0} Delta_m(l+1) Pr[L>l],  Delta_m(l) = l^m - (l-1)^m
//   direct_pmf:         sum_{l>=1} l^m Pr[L=l]
// Both truncate at the same certified cutoff and must agree to ~eps.

#include <cmath>
#include <cstdint>
#include <limits>
#include <cstdio>
#include <string>

#include "rankedmm/model.hpp"

namespace rankedmm {

namespace detail {

// Neumaier-compensated accumulator. Keeps million-term survival sums at a
// few ulp, which is what lets the truncation tolerance be meaningful.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + carry; }
};

inline double ipow(double base, int exponent) {
  double acc = 1.0;
  for (int i = 0; i < exponent; ++i) acc *= base;
  return acc;
}

// Delta_m(l) = l^m - (l-1)^m evaluated through the expanded binomial
//
//   Delta_m(l) = sum_{0<=j<m} (-1)^{m-1-j} C(m,j) l^j
//
// by Horner. The subtraction form loses ~6 digits near l = 1e6; this form
// does not.
inline double backward_difference_fp(int m, double l) {
  double binom = 1.0;  // C(m, m-1-k) built incrementally, starting at C(m, m-1) = m
  double acc = 0.0;
  double sign = 1.0;
  for (int k = 0; k < m; ++k) {
    if (k == 0) {
      binom = m;
    } else {
      // C(m, m-1-k) = C(m, m-k) * (m-k) / (k+1)
      binom = binom * (m - k) / (k + 1);
    }
    acc = acc * l + sign * binom;
    sign = -sign;
  }
  return acc;
}

// Certified bound on everything omitted past index l from series of the form
// sum_k w(k) Pr[L>k] with 0 <= w(k) <= (k+1)^p. Survival decays at least
// geometrically from l on, S_{k+1}/S_k <= lambda/(k+1), and the weight stays
// below (l+1+lambda)^p until that decay has taken over; the factor 2 absorbs
// the negligible remainder beyond that window.
inline double tail_certificate(double lambda, int l, double survival_l, int p) {
  const double rho = lambda / (l + 1.0);
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  return 2.0 * survival_l * ipow(l + 1.0 + lambda, p) / (1.0 - rho);
}

// Relative accumulation floor: below this no truncation target is honest in
// double precision.
inline constexpr double kEpsFloor = 16.0 * std::numeric_limits<double>::epsilon();

inline std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw param_error("eps must be positive and finite");
  }
  if (eps < kEpsFloor) {
    throw capacity_error("eps = " + format_sci(eps) +
                             " is below the double-precision accumulation floor; "
                             "achievable bound is " +
                             format_sci(kEpsFloor),
                         kEpsFloor);
  }
}

}  // namespace detail

// l^m - (l-1)^m. `value` is exact when `exact` is true; otherwise the result
// overflowed 64-bit range and only the floating-point `approx` is meaningful.
struct BackwardDifference {
  std::int64_t value = 0;
  double approx = 0.0;
  bool exact = true;
};

inline BackwardDifference backward_difference(int m, std::int64_t l) {
  if (m < 1) throw param_error("backward difference needs m >= 1");
  if (l < 1) throw param_error("backward difference needs l >= 1");
  BackwardDifference result;
  result.approx = detail::backward_difference_fp(m, static_cast<double>(l));

  using u128 = unsigned __int128;
  const u128 kMax = ~static_cast<u128>(0);
  auto pow128 = [&](u128 base, int e, bool& ok) {
    u128 acc = 1;
    for (int i = 0; i < e; ++i) {
      if (base != 0 && acc > kMax / base) {
        ok = false;
        return acc;
      }
      acc *= base;
    }
    ok = true;
    return acc;
  };
  bool ok_hi = true;
  bool ok_lo = true;
  const u128 hi = pow128(static_cast<u128>(l), m, ok_hi);
  const u128 lo = pow128(static_cast<u128>(l - 1), m, ok_lo);
  if (ok_hi && ok_lo) {
    const u128 diff = hi - lo;
    if (diff <= static_cast<u128>(std::numeric_limits<std::int64_t>::max())) {
      result.value = static_cast<std::int64_t>(diff);
      result.exact = true;
      return result;
    }
  }
  result.exact = false;
  return result;
}

enum class MomentMethod { partial_summation, direct_pmf };

inline const char* to_string(MomentMethod method) {
  return method == MomentMethod::partial_summation ? "partial_summation" : "direct_pmf";
}

// exact: Ex[L^m]; l_cut: truncation index; truncation_bound: certified bound
// on the omitted tail relative to `exact` (always <= the requested eps).
struct MomentReport {
  int m = 0;
  double exact = 0.0;
  int l_cut = 0;
  double truncation_bound = 0.0;
  MomentMethod method = MomentMethod::partial_summation;
};

// Ex[L^m] to relative tolerance eps. Streams the survival recursion once,
// accumulating both routes, and truncates at the first l >= lambda + 10*sqrt(lambda)
// where the geometric-domination certificate clears eps.
//
// m is capped at 6: at lambda = 1e6 the weights l^m stay exactly
// representable through m = 6 and not beyond.
inline MomentReport exact_moment(const ModelParams& params, int m, double eps = 1e-10,
                                 MomentMethod method = MomentMethod::partial_summation) {
  if (m < 0) throw param_error("moment order must be >= 0");
  if (m > 6) throw param_error("moment order capped at 6");
  detail::check_eps(eps);
  if (m == 0) return {0, 1.0, 0, 0.0, method};  // total probability

  const double lambda = params.lambda;
  const int l_start = static_cast<int>(std::ceil(lambda + 10.0 * std::sqrt(lambda)));
  detail::CompensatedSum by_parts;  // sum Delta_m(l+1) Pr[L>l]
  detail::CompensatedSum by_pmf;    // sum l^m Pr[L=l]
  double d = 1.0;
  double s = 1.0;
  double s_prev = 1.0;
  for (int l = 0;; ++l) {
    if (l > 0) {
      d = 1.0 + (static_cast<double>(l) / lambda) * d;
      s_prev = s;
      s = std::isfinite(d) ? 1.0 / d : 0.0;
    }
    by_parts.add(detail::backward_difference_fp(m, l + 1.0) * s);
    if (l >= 1) by_pmf.add(detail::ipow(static_cast<double>(l), m) * (s_prev - s));
    if (l >= l_start) {
      const double cert = detail::tail_certificate(lambda, l, s, m);
      const double scale = by_parts.value();  // >= 1 by this point (L >= 1 a.s.)
      if (cert <= 0.5 * eps * scale) {
        const double exact =
            method == MomentMethod::partial_summation ? by_parts.value() : by_pmf.value();
        return {m, exact, l, cert / exact, method};
      }
    }
    if (l > 100000000) {
      throw capacity_error("moment truncation did not certify below eps", detail::kEpsFloor);
    }
  }
}

}  // namespace rankedmm
