#pragma once

// Error-bounded trapezoidal estimation under the independence assumption:
//   p~_x = E[g^x(F_x)],  g^x(f) = prod_{z != x} Phi((f - mu_z)/sigma_z),
// integrated over a shared grid whose point count guarantees a per-arm
// absolute error of at most epsilon before normalization. The same grid
// drives EST's kappa~ quadrature.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pom/detail/bulk_normal.hpp"
#include "pom/error.hpp"
#include "pom/gauss.hpp"
#include "pom/types.hpp"

namespace pom {

// Conceptual points are f_0 = -inf < f_1 < ... < f_{n-1} < f_n = +inf with
// the n-1 interior points equidistant; only the interior is materialized.
struct IntegrationGrid {
  double epsilon = 0.0;
  double eps_tilde = 0.0;  // -Phi^{-1}(2 eps)
  std::size_t n = 0;       // number of cells
  double spacing = 0.0;    // 0 for the degenerate single-point grid
  std::vector<double> interior;
};

inline IntegrationGrid shared_integration_grid(const IndependentGaussianBelief& b,
                                               double epsilon,
                                               std::size_t point_cap) {
  if (!(epsilon > 0.0) || epsilon > 0.25)
    throw PomError(PomErrc::invalid_epsilon,
                   "integration grid requires epsilon in (0, 1/4]");
  IntegrationGrid g;
  g.epsilon = epsilon;
  g.eps_tilde = -gauss::quantile(2.0 * epsilon);  // >= 0 since 2 eps <= 1/2
  const double range = b.mu_max() - b.mu_min() + 2.0 * g.eps_tilde * b.sigma_max();
  const double cell = epsilon * 2.0 * gauss::sqrt_2pi * b.sigma_min();
  const double n_f = std::ceil(range / cell) + 2.0;
  if (!(n_f <= static_cast<double>(point_cap)))
    throw PomError(PomErrc::grid_too_large,
                   "grid needs " + std::to_string(n_f) + " cells, cap is " +
                       std::to_string(point_cap));
  g.n = static_cast<std::size_t>(n_f);
  const double left = b.mu_min() - g.eps_tilde * b.sigma_max();
  g.interior.resize(g.n - 1);
  if (g.n == 2) {
    g.interior[0] = left;  // zero-width range: three points (-inf, mu, +inf)
    g.spacing = 0.0;
  } else {
    const double denom = static_cast<double>(g.n - 2);
    for (std::size_t i = 1; i < g.n; ++i)
      g.interior[i - 1] = left + (static_cast<double>(i - 1) / denom) * range;
    g.spacing = range / denom;
  }
  return g;
}

namespace detail {

// lg[i] = sum_z ln Phi((f_i - mu_z)/sigma_z) over the interior points.
// Arms stop contributing once (f - mu_z)/sigma_z >= 8.5 (|ln Phi| < 1e-16),
// and the points are ascending, so each arm covers a prefix-complement.
inline std::vector<double> log_g_on_grid(const IndependentGaussianBelief& b,
                                         const std::vector<double>& pts) {
  std::vector<double> lg(pts.size(), 0.0);
  for (std::size_t z = 0; z < b.size(); ++z) {
    const double mu = b.mu()[z];
    const double inv_s = 1.0 / b.sigma()[z];
    const double cutoff = mu + 8.5 * b.sigma()[z];
    const std::size_t hi = static_cast<std::size_t>(
        std::upper_bound(pts.begin(), pts.end(), cutoff) - pts.begin());
    for (std::size_t i = 0; i < hi; ++i)
      lg[i] += gauss::bulk::log_cdf((pts[i] - mu) * inv_s);
  }
  return lg;
}

}  // namespace detail

inline PomEstimate estimate_independence(const IndependentGaussianBelief& b,
                                         const ConvergenceConfig& cfg) {
  const double eps = cfg.resolve_epsilon(b.size());
  const IntegrationGrid grid = shared_integration_grid(b, eps, cfg.grid_point_cap);
  const std::vector<double>& f = grid.interior;
  const std::size_t m = f.size();

  const std::vector<double> lg = detail::log_g_on_grid(b, f);
  std::vector<double> gval(m);
  for (std::size_t i = 0; i < m; ++i) gval[i] = std::exp(lg[i]);

  const std::size_t n_arms = b.size();
  std::vector<double> raw(n_arms, 0.0);
  for (std::size_t x = 0; x < n_arms; ++x) {
    const double mu = b.mu()[x];
    const double sig = b.sigma()[x];
    const double inv_s = 1.0 / sig;
    // Cells outside mu +- 9 sigma carry < 1.2e-19 of this arm's mass and a
    // g^x of at most 1, so they collapse into the two boundary trapezoids.
    std::size_t ilo = static_cast<std::size_t>(
        std::lower_bound(f.begin(), f.end(), mu - 9.0 * sig) - f.begin());
    std::size_t ihi = static_cast<std::size_t>(
        std::upper_bound(f.begin(), f.end(), mu + 9.0 * sig) - f.begin());
    if (ilo >= m) ilo = m - 1;
    if (ihi == 0) ihi = 1;

    double sum = 0.0;
    double prev_gx = 0.0;   // g^x(f_0 = -inf)
    double prev_cdf = 0.0;  // Phi_x(-inf)
    for (std::size_t i = ilo; i < ihi; ++i) {
      const double t = (f[i] - mu) * inv_s;
      const double cdf_x = gauss::bulk::cdf(t);
      // g^x = g / Phi_x; within the mass window Phi_x >= Phi(-9) ~ 1e-19, so
      // an underflowed g means g^x is negligible as well
      double gx = cdf_x > 0.0 ? gval[i] / cdf_x : 0.0;
      if (gx > 1.0) gx = 1.0;
      sum += 0.5 * (gx + prev_gx) * (cdf_x - prev_cdf);
      prev_gx = gx;
      prev_cdf = cdf_x;
    }
    sum += 0.5 * (1.0 + prev_gx) * (1.0 - prev_cdf);  // cell (f_last, +inf)
    raw[x] = std::max(sum, 0.0);
  }

  PomEstimate out;
  out.method = Method::indep;
  out.raw = raw;
  out.probs = detail::normalized(raw);
  out.iterations = grid.n;
  out.max_error_bound = eps;
  return out;
}

}  // namespace pom
