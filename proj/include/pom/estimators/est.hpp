#pragma once

// EST baseline: the PoM lower bound
//   p~_x ≈ [P(F_x >= k~)/(1 - P(F_x >= k~))] * prod_z P(F_z <= k~)
// with k~ = E[max_z F_z] under the independent surrogate, linearly
// normalized to the simplex. k~ comes from a midpoint rule over the shared
// integration grid with G = exp(sum log Phi); the two infinite cells are
// truncated to the window edges (their G-mass is at most 4 epsilon).

#include <cmath>
#include <cstddef>
#include <vector>

#include "pom/estimators/grid.hpp"
#include "pom/gauss.hpp"
#include "pom/types.hpp"

namespace pom {

namespace detail {

inline double est_threshold(const IndependentGaussianBelief& b,
                            const IntegrationGrid& grid) {
  const std::vector<double>& f = grid.interior;
  const std::vector<double> lg = log_g_on_grid(b, f);
  const std::size_t m = f.size();
  if (m == 1) return f[0];
  double kt = 0.0;
  double g_prev = std::exp(lg[0]);
  kt += f[0] * g_prev;  // cell (-inf, f_1] collapsed onto the left edge
  for (std::size_t i = 1; i < m; ++i) {
    const double g_i = std::exp(lg[i]);
    kt += 0.5 * (f[i - 1] + f[i]) * (g_i - g_prev);
    g_prev = g_i;
  }
  kt += f[m - 1] * (1.0 - g_prev);  // cell (f_{n-1}, +inf) onto the right edge
  return kt;
}

}  // namespace detail

inline PomEstimate estimate_est(const IndependentGaussianBelief& b,
                                const ConvergenceConfig& cfg) {
  const double eps = cfg.resolve_epsilon(b.size());
  const IntegrationGrid grid = shared_integration_grid(b, eps, cfg.grid_point_cap);
  const double kt = detail::est_threshold(b, grid);

  const std::size_t n = b.size();
  std::vector<double> log_cdf_at_kt(n);
  double log_prod = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    log_cdf_at_kt[x] = gauss::log_cdf((kt - b.mu()[x]) / b.sigma()[x]);
    log_prod += log_cdf_at_kt[x];
  }

  std::vector<double> log_score(n);
  double max_ls = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < n; ++x) {
    const double up = (b.mu()[x] - kt) / b.sigma()[x];
    if (gauss::cdf(up) >= 1.0 - 1e-15)
      throw PomError(PomErrc::degenerate_ratio,
                     "P[F_x >= kappa~] too close to 1", x);
    // log of survival/(1-survival): both factors via the log-domain cdf
    log_score[x] = gauss::log_cdf(up) - log_cdf_at_kt[x] + log_prod;
    if (log_score[x] > max_ls) max_ls = log_score[x];
  }

  PomEstimate out;
  out.method = Method::est;
  out.raw.resize(n);
  out.probs.resize(n);
  double sum = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    out.raw[x] = std::exp(log_score[x]);
    out.probs[x] = std::exp(log_score[x] - max_ls);
    sum += out.probs[x];
  }
  for (std::size_t x = 0; x < n; ++x) out.probs[x] /= sum;
  out.threshold = kt;
  out.iterations = grid.n;
  return out;
}

}  // namespace pom
