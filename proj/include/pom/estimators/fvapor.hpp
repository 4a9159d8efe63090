#pragma once

// F-VAPOR: closed-form maximizer of the UCB + entropy-regularization
// objective, v_x = v((mu_x - nu*)/sigma_x) with v(c) = exp(-(sqrt(c^2+4)-c)^2/8)
// and nu* the normalizing threshold. Same bisection scheme as F-LITE with v
// in place of Phi; the search window comes from v^{-1}(1/N).

#include <cmath>

#include "pom/estimators/threshold_search.hpp"
#include "pom/types.hpp"

namespace pom {

// sigmoidal v: (0,1), increasing; for c > 0 the difference sqrt(c^2+4) - c
// is formed as 4/(sqrt(c^2+4)+c) to avoid cancellation
inline double vapor_unit(double c) noexcept {
  const double r = std::hypot(c, 2.0);
  const double w = c > 0.0 ? 4.0 / (r + c) : r - c;
  return std::exp(-0.125 * w * w);
}

// v^{-1}(r) = 1/sqrt(-2 ln r) - sqrt(-2 ln r), r in (0,1); <= 0 for r <= v(0)
inline double vapor_unit_inv(double r) {
  if (!(r > 0.0 && r < 1.0))
    throw PomError(PomErrc::domain_error, "vapor_unit_inv requires r in (0,1)");
  const double t = std::sqrt(-2.0 * std::log(r));
  return 1.0 / t - t;
}

inline PomEstimate estimate_fvapor(const IndependentGaussianBelief& b,
                                   const ConvergenceConfig& cfg) {
  const double eps = cfg.resolve_epsilon(b.size());
  const double vi = vapor_unit_inv(1.0 / static_cast<double>(b.size()));  // <= 0
  const double lo = b.mu_min() - vi * b.sigma_min();
  const double hi = b.mu_max() - vi * b.sigma_max();

  PomEstimate out;
  out.method = Method::fvapor;
  std::vector<double> mid;
  const auto st = detail::threshold_bisection(
      b, eps, cfg.max_iterations, lo, hi,
      [](double c) { return vapor_unit(c); }, mid);
  out.raw = mid;
  out.probs = detail::normalized(mid);
  out.threshold = 0.5 * (st.kappa_low + st.kappa_up);
  out.iterations = st.iterations;
  out.max_error_bound = st.max_error;
  return out;
}

}  // namespace pom
