#pragma once

// A-LITE: two-stage quartile matching with interval-propagated bounds.
//
// Stage 1 bisects g(f) = prod_z Phi((f - mu_z)/sigma_z) against 0.25 / 0.75
// inside the window mu_min + sigma_min * Phi^{-1}(b^{1/N}) <= f <=
// mu_max + sigma_max * Phi^{-1}(b^{1/N}) and converts the quartile intervals
// into bounds on the matched Gaussian's (m, s).
//
// Stage 2 clamps m~ = max(m, mu_max), s~_x = min(s, sigma_x) and bisects the
// ratio g~^x(f) = Phi((f - m~)/s~_x) / Phi((f - mu_x)/sigma_x) per arm inside
// the window of the F*\x-quantile-search proposition, carrying upper/lower
// variants of every quantity.
//
// Predictions: variant I uses (m, s), variant II uses (m_x, s_x); the
// element-wise maximum of the two interval predictions brackets the
// probability of maximality, and the outer loop doubles the search depth d
// until max_x (p_up - p_low) < epsilon. Rounds whose s lower bounds go
// negative (or whose stage-2 windows degenerate) are discarded and retried
// at the doubled depth, as in the restart rule of the source algorithm.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pom/detail/bulk_normal.hpp"
#include "pom/error.hpp"
#include "pom/gauss.hpp"
#include "pom/types.hpp"

namespace pom {

struct QuartileInterval {
  double q1_low = 0, q1_up = 0, q3_low = 0, q3_up = 0;
  // m = (q3 + q1)/2 and s = (q3 - q1)/(2 Phi^{-1}(0.75)), with the cross
  // combinations giving the bounds
  double m_low() const { return 0.5 * (q3_low + q1_low); }
  double m_up() const { return 0.5 * (q3_up + q1_up); }
  double s_low(double z75) const { return (q3_low - q1_up) / (2.0 * z75); }
  double s_up(double z75) const { return (q3_up - q1_low) / (2.0 * z75); }
};

namespace detail_alite {

constexpr double kLog14 = -1.38629436111989061883;  // ln 0.25
constexpr double kLog34 = -0.28768207245178092744;  // ln 0.75

inline double std_arg(double f, double m, double s) noexcept {
  if (s > 0.0) return (f - m) / s;
  if (f > m) return std::numeric_limits<double>::infinity();
  if (f < m) return -std::numeric_limits<double>::infinity();
  return 0.0;
}

// sum_z ln Phi((f - mu_z)/sigma_z)
inline double log_g(const IndependentGaussianBelief& b, double f) noexcept {
  double s = 0.0;
  for (std::size_t z = 0; z < b.size(); ++z)
    s += gauss::bulk::log_cdf((f - b.mu()[z]) / b.sigma()[z]);
  return s;
}

// Stage 1: d bisection steps for both quartiles of g.
inline QuartileInterval stage1_search(const IndependentGaussianBelief& b,
                                      std::size_t d) {
  const double n = static_cast<double>(b.size());
  // Phi^{-1}(b^{1/N}) via the exact complement 1 - b^{1/N} = -expm1(ln b / N)
  const double z1 = -gauss::quantile(-std::expm1(std::log(0.25) / n));
  const double z3 = -gauss::quantile(-std::expm1(std::log(0.75) / n));

  QuartileInterval q;
  q.q1_low = b.mu_min() + b.sigma_min() * z1;
  q.q1_up = b.mu_max() + b.sigma_max() * z1;
  q.q3_low = b.mu_min() + b.sigma_min() * z3;
  q.q3_up = b.mu_max() + b.sigma_max() * z3;

  for (std::size_t k = 0; k < d; ++k) {
    const double q1 = 0.5 * (q.q1_up + q.q1_low);
    const double q3 = 0.5 * (q.q3_up + q.q3_low);
    if (log_g(b, q1) > kLog14)
      q.q1_up = q1;
    else
      q.q1_low = q1;
    if (log_g(b, q3) > kLog34)
      q.q3_up = q3;
    else
      q.q3_low = q3;
  }
  return q;
}

struct Stage2Result {
  std::vector<double> m_low, m_up, s_low, s_up;
  bool valid = true;  // false => restart the outer loop at doubled depth
};

// Window of the F*\x-quantile search for threshold b, with the limit
// convention: a branch whose denominator vanishes is -inf inside the max.
inline double stage2_window_low(double b_thr, double mu_x, double sigma_x,
                                double m_lo, double s_up_x) {
  const double l2b = std::log(2.0 / b_thr);
  const double gap = m_lo - mu_x;
  double branch1 = -std::numeric_limits<double>::infinity();
  if (gap > 0.0) branch1 = 0.5 * (m_lo + mu_x) - sigma_x * sigma_x * l2b / gap;
  double branch2 = -std::numeric_limits<double>::infinity();
  const double ratio = s_up_x / sigma_x;
  const double denom = 1.0 - ratio * ratio;
  if (denom > 0.0) branch2 = m_lo - std::sqrt(2.0 * l2b / denom) * s_up_x;
  const double inner = std::max(branch1, branch2);
  return std::min(mu_x - std::sqrt(2.0) * sigma_x, inner);
}

// Stage 2: per-arm quartile intervals for the ratio g~^x, d bisection steps,
// vectorized across arms.
inline Stage2Result stage2_search(const IndependentGaussianBelief& b,
                                  std::size_t d, double m_up, double m_lo,
                                  double s_up, double s_lo, double z75) {
  const std::size_t n = b.size();
  const double tm_up = std::max(m_up, b.mu_max());
  const double tm_lo = std::max(m_lo, b.mu_max());

  Stage2Result r;
  std::vector<double> ts_up(n), ts_lo(n);
  std::vector<double> q1lo(n), q1up(n), q3lo(n), q3up(n);
  for (std::size_t x = 0; x < n; ++x) {
    const double sx = b.sigma()[x];
    ts_up[x] = std::min(s_up, sx);
    ts_lo[x] = std::min(s_lo, sx);
    q1lo[x] = stage2_window_low(0.25, b.mu()[x], sx, tm_lo, ts_up[x]);
    q1up[x] = tm_up - z75 * ts_lo[x];  // Phi^{-1}(0.25) = -Phi^{-1}(0.75)
    q3lo[x] = stage2_window_low(0.75, b.mu()[x], sx, tm_lo, ts_up[x]);
    q3up[x] = tm_up + z75 * ts_up[x];
    if (!std::isfinite(q1lo[x]) || !std::isfinite(q3lo[x]) || q1lo[x] > q1up[x] ||
        q3lo[x] > q3up[x]) {
      r.valid = false;
      return r;
    }
  }

  auto ratio_bounds = [&](double q, std::size_t x, double& lo, double& up) {
    const double denom = gauss::bulk::log_cdf((q - b.mu()[x]) / b.sigma()[x]);
    const double a = gauss::bulk::log_cdf(std_arg(q, tm_lo, ts_up[x])) - denom;
    const double bb = gauss::bulk::log_cdf(std_arg(q, tm_lo, ts_lo[x])) - denom;
    const double c = gauss::bulk::log_cdf(std_arg(q, tm_up, ts_up[x])) - denom;
    const double dd = gauss::bulk::log_cdf(std_arg(q, tm_up, ts_lo[x])) - denom;
    up = std::max(a, bb);
    lo = std::min(c, dd);
  };

  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t x = 0; x < n; ++x) {
      double glo, gup;
      const double q1 = 0.5 * (q1up[x] + q1lo[x]);
      ratio_bounds(q1, x, glo, gup);
      if (glo >= kLog14)
        q1up[x] = q1;
      else if (gup <= kLog14)
        q1lo[x] = q1;
      const double q3 = 0.5 * (q3up[x] + q3lo[x]);
      ratio_bounds(q3, x, glo, gup);
      if (glo >= kLog34)
        q3up[x] = q3;
      else if (gup <= kLog34)
        q3lo[x] = q3;
    }
  }

  const double inv_2z75 = 0.5 / z75;
  r.m_low.resize(n);
  r.m_up.resize(n);
  r.s_low.resize(n);
  r.s_up.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    r.m_up[x] = 0.5 * (q3up[x] + q1up[x]);
    r.m_low[x] = 0.5 * (q3lo[x] + q1lo[x]);
    r.s_up[x] = (q3up[x] - q1lo[x]) * inv_2z75;
    r.s_low[x] = (q3lo[x] - q1up[x]) * inv_2z75;
  }
  return r;
}

// Phi((mu - m)/sqrt(sigma^2 + s^2)) maximized/minimized over s in {s_a, s_b}
inline double pred_hi(double mu, double m, double sigma2, double s_a, double s_b) {
  const double c = std::max((mu - m) / std::sqrt(sigma2 + s_a * s_a),
                            (mu - m) / std::sqrt(sigma2 + s_b * s_b));
  return gauss::cdf(c);
}
inline double pred_lo(double mu, double m, double sigma2, double s_a, double s_b) {
  const double c = std::min((mu - m) / std::sqrt(sigma2 + s_a * s_a),
                            (mu - m) / std::sqrt(sigma2 + s_b * s_b));
  return gauss::cdf(c);
}

}  // namespace detail_alite

inline PomEstimate estimate_alite(const IndependentGaussianBelief& b,
                                  const ConvergenceConfig& cfg) {
  using namespace detail_alite;
  const double eps = cfg.resolve_epsilon(b.size());
  const std::size_t n = b.size();
  const double z75 = gauss::quantile(0.75);
  constexpr std::size_t kDepthCap = std::size_t(1) << 20;

  std::vector<double> p_low(n), p_up(n);
  double max_error = eps;  // enter the loop at least once
  std::size_t d = 1;

  while (max_error >= eps) {
    d *= 2;
    if (d > kDepthCap)
      throw PomError(PomErrc::max_iterations_exceeded,
                     "A-LITE depth cap reached before convergence");

    const QuartileInterval q = stage1_search(b, d);
    const double m_up = q.m_up(), m_lo = q.m_low();
    const double s_up = q.s_up(z75), s_lo = q.s_low(z75);
    if (s_lo < 0.0) continue;  // restart at doubled depth

    const Stage2Result s2 = stage2_search(b, d, m_up, m_lo, s_up, s_lo, z75);
    if (!s2.valid) continue;
    bool neg = false;
    for (std::size_t x = 0; x < n; ++x)
      if (s2.s_low[x] < 0.0) {
        neg = true;
        break;
      }
    if (neg) continue;

    max_error = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const double mu = b.mu()[x];
      const double sigma2 = b.sigma()[x] * b.sigma()[x];
      const double pIu = pred_hi(mu, m_lo, sigma2, s_lo, s_up);
      const double pIl = pred_lo(mu, m_up, sigma2, s_lo, s_up);
      const double pIIu = pred_hi(mu, s2.m_low[x], sigma2, s2.s_low[x], s2.s_up[x]);
      const double pIIl = pred_lo(mu, s2.m_up[x], sigma2, s2.s_low[x], s2.s_up[x]);
      p_up[x] = std::max(pIu, pIIu);
      p_low[x] = std::max(pIl, pIIl);
      max_error = std::max(max_error, p_up[x] - p_low[x]);
    }
  }

  PomEstimate out;
  out.method = Method::alite;
  out.raw.resize(n);
  for (std::size_t x = 0; x < n; ++x) out.raw[x] = 0.5 * (p_up[x] + p_low[x]);
  out.probs = detail::normalized(out.raw);
  out.lower = std::move(p_low);
  out.upper = std::move(p_up);
  out.iterations = d;
  out.max_error_bound = max_error;
  return out;
}

}  // namespace pom
