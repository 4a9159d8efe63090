#pragma once

// F-LITE: q_x = Phi((mu_x - kappa*)/sigma_x) with kappa* the shared threshold
// that makes the q_x sum to 1, found by plain-midpoint bisection inside the
// window [mu_min + sigma_min * -Phi^{-1}(1/N), mu_max + sigma_max * -Phi^{-1}(1/N)].
// Also the closed-form derivatives of q w.r.t. mu and sigma.

#include <cstddef>
#include <vector>

#include "pom/detail/bulk_normal.hpp"
#include "pom/estimators/threshold_search.hpp"
#include "pom/gauss.hpp"
#include "pom/types.hpp"

namespace pom {

inline PomEstimate estimate_flite(const IndependentGaussianBelief& b,
                                  const ConvergenceConfig& cfg) {
  const double eps = cfg.resolve_epsilon(b.size());
  const double t = -gauss::quantile(1.0 / static_cast<double>(b.size()));
  const double lo = b.mu_min() + b.sigma_min() * t;
  const double hi = b.mu_max() + b.sigma_max() * t;

  PomEstimate out;
  out.method = Method::flite;
  std::vector<double> mid;
  const auto st = detail::threshold_bisection(
      b, eps, cfg.max_iterations, lo, hi,
      [](double c) { return gauss::bulk::cdf(c); }, mid);
  out.raw = mid;
  out.probs = detail::normalized(mid);
  out.threshold = 0.5 * (st.kappa_low + st.kappa_up);
  out.iterations = st.iterations;
  out.max_error_bound = st.max_error;
  return out;
}

struct FliteGradients {
  std::size_t n = 0;
  std::vector<double> dmu;     // row-major, entry (x, z) = d q_x / d mu_z
  std::vector<double> dsigma;  // row-major, entry (x, z) = d q_x / d sigma_z
  double at_mu(std::size_t x, std::size_t z) const { return dmu[x * n + z]; }
  double at_sigma(std::size_t x, std::size_t z) const { return dsigma[x * n + z]; }
};

// dq_x/dmu_z    = h_x (1_{x=z} - h_z / sum_w h_w),  h_x = phi((mu_x-k*)/s_x)/s_x
// dq_x/dsigma_z = dq_x/dmu_z * (k* - mu_z)/sigma_z
// Columns of both matrices sum to zero.
inline FliteGradients flite_gradients(const IndependentGaussianBelief& b,
                                      double kappa_star) {
  const std::size_t n = b.size();
  const std::vector<double>& mu = b.mu();
  const std::vector<double>& sigma = b.sigma();

  std::vector<double> h(n);
  double total = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    h[x] = gauss::pdf((mu[x] - kappa_star) / sigma[x]) / sigma[x];
    total += h[x];
  }

  FliteGradients g;
  g.n = n;
  g.dmu.assign(n * n, 0.0);
  g.dsigma.assign(n * n, 0.0);
  if (total <= 0.0) return g;  // threshold out of reach of every arm

  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = 0; z < n; ++z) {
      const double dm = h[x] * ((x == z ? 1.0 : 0.0) - h[z] / total);
      g.dmu[x * n + z] = dm;
      g.dsigma[x * n + z] = dm * (kappa_star - mu[z]) / sigma[z];
    }
  }
  return g;
}

}  // namespace pom
