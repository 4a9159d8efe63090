#pragma once

// Table-backed Phi and ln Phi for the O(grid x arms) inner loops, where libm
// erfc (~14 ns) dominates the runtime. A uniform grid over [-38, 8.5] with
// 4-point cubic interpolation gives ~1e-13 absolute error at ~3 ns per call;
// outside the window the functions saturate or switch to the asymptotic tail.
//
// These are an internal detail: the public gauss:: functions stay erfc-exact.

#include <cmath>
#include <vector>

#include "pom/gauss.hpp"

namespace pom::gauss::bulk {

namespace detail {

struct Tables {
  static constexpr double lo = -38.0;
  static constexpr double hi = 8.5;
  static constexpr double inv_step = 1024.0;
  static constexpr double step = 1.0 / 1024.0;

  std::vector<double> cdf_v;
  std::vector<double> logcdf_v;

  Tables() {
    // nodes x_j = lo + j*step for j in [-1, m+2] so the cubic stencil around
    // any t in [lo, hi) stays inside the arrays
    const int m = static_cast<int>((hi - lo) * inv_step + 0.5);
    const int count = m + 4;
    cdf_v.resize(count);
    logcdf_v.resize(count);
    for (int k = 0; k < count; ++k) {
      const double x = lo + (k - 1) * step;
      cdf_v[k] = gauss::cdf(x);
      logcdf_v[k] = gauss::log_cdf(x);
    }
  }
};

inline const Tables& tables() {
  static const Tables t;
  return t;
}

// cubic Lagrange on nodes {-1,0,1,2} around the cell containing t
inline double interpolate(const std::vector<double>& v, double t) noexcept {
  const double a = (t - Tables::lo) * Tables::inv_step;
  const int j = static_cast<int>(a);
  const double u = a - j;
  const double um1 = u - 1.0, um2 = u - 2.0, up1 = u + 1.0;
  const double w0 = -u * um1 * um2 * (1.0 / 6.0);
  const double w1 = up1 * um1 * um2 * 0.5;
  const double w2 = -up1 * u * um2 * 0.5;
  const double w3 = up1 * u * um1 * (1.0 / 6.0);
  const double* p = v.data() + j;  // node x_{j-1} sits at index j
  return w0 * p[0] + w1 * p[1] + w2 * p[2] + w3 * p[3];
}

}  // namespace detail

inline double cdf(double t) noexcept {
  if (t >= detail::Tables::hi) return 1.0;
  if (t <= detail::Tables::lo) return 0.0;  // < 3e-316, below the mass cutoffs
  return detail::interpolate(detail::tables().cdf_v, t);
}

inline double log_cdf(double t) noexcept {
  if (t >= detail::Tables::hi) return 0.0;  // |ln Phi| < 7e-17
  if (t <= detail::Tables::lo) return gauss::detail::log_cdf_tail(t);
  return detail::interpolate(detail::tables().logcdf_v, t);
}

// touches the lazily built tables (e.g. before timing-sensitive sections)
inline void warmup() { detail::tables(); }

}  // namespace pom::gauss::bulk
