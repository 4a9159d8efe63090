#pragma once

// Standard-normal special functions with the accuracy the estimators need:
//   pdf / log_pdf  : direct evaluation
//   cdf            : 0.5*erfc(-x/sqrt(2)), abs error ~1e-16
//   log_cdf        : log(cdf) in the body, log1p path for x > 0, and an
//                    asymptotic tail series below x = -10 so values stay
//                    finite down to x ~ -38 and far beyond
//   quantile       : rational initial guess refined by one Newton step
//                    (log-space Newton in the tails), ~1e-15 relative
//
// Everything here is pure and reentrant.

#include <cmath>
#include <limits>

#include "pom/error.hpp"

namespace pom::gauss {

inline constexpr double inv_sqrt2 = 0.70710678118654752440084436210485;
inline constexpr double sqrt_2pi = 2.50662827463100050241576528481105;
inline constexpr double inv_sqrt_2pi = 0.39894228040143267793994605993438;
inline constexpr double log_sqrt_2pi = 0.91893853320467274178032973640562;

inline double pdf(double x) noexcept {
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double log_pdf(double x) noexcept { return -0.5 * x * x - log_sqrt_2pi; }

inline double cdf(double x) noexcept {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-x * inv_sqrt2);
}

namespace detail {

// ln Phi(x) for x <= -10 from the alternating (2k-1)!! expansion
//   Phi(x) = phi(x)/(-x) * (1 - 1/x^2 + 3/x^4 - ...).
// Thirteen terms put the truncation floor near 3e-13 at x = -10; the series
// only sharpens further into the tail.
inline double log_cdf_tail(double x) noexcept {
  const double u = 1.0 / (x * x);
  const double s =
      1.0 +
      u * (-1.0 +
           u * (3.0 +
                u * (-15.0 +
                     u * (105.0 +
                          u * (-945.0 +
                               u * (10395.0 +
                                    u * (-135135.0 +
                                         u * (2027025.0 +
                                              u * (-34459425.0 +
                                                   u * (654729075.0 +
                                                        u * (-13749310575.0 +
                                                             u * 316234143225.0)))))))))));
  return -0.5 * x * x - std::log(-x) - log_sqrt_2pi + std::log(s);
}

}  // namespace detail

inline double log_cdf(double x) noexcept {
  if (x < -10.0) return detail::log_cdf_tail(x);
  // erfc's tail is relatively accurate, so log1p(-Phi(-x)) keeps the result
  // at full relative precision where Phi(x) is close to 1.
  if (x > 0.0) return std::log1p(-cdf(-x));
  return std::log(cdf(x));
}

namespace detail {

// Acklam's rational approximation of the probit function (~1.15e-9 relative),
// used as the initial guess for a single Newton polish.
inline double probit_estimate(double p) noexcept {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

inline double quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw PomError(PomErrc::domain_error, "quantile requires p in (0,1)");
  if (p == 0.5) return 0.0;

  double z = detail::probit_estimate(p);
  constexpr double p_low = 0.02425;
  if (p < p_low || p > 1.0 - p_low) {
    // Newton on ln Phi(z) = ln q in the lower tail; 1 - p is exact for
    // p >= 0.5, so both tails resolve cleanly.
    const bool lower = p < 0.5;
    const double lq = std::log(lower ? p : 1.0 - p);
    double zl = lower ? z : -z;
    const double f = log_cdf(zl) - lq;
    zl -= f * std::exp(log_cdf(zl) - log_pdf(zl));
    z = lower ? zl : -zl;
  } else {
    z -= (cdf(z) - p) / pdf(z);
  }
  return z;
}

// Phi^{-1}(1 - q) evaluated without forming 1 - q; callers pass the exact
// complement (e.g. -expm1(ln(b)/N) for b^{1/N}).
inline double quantile_complement(double q) { return -quantile(q); }

}  // namespace pom::gauss
