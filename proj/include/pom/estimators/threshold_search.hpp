#pragma once

// Shared bisection core for the normalizing-threshold estimators. Both
// F-LITE and F-VAPOR bisect a continuous, monotonically decreasing
// s(kappa) = sum_x unit((mu_x - kappa)/sigma_x) against 1 and stop once
// max_x [unit_low - unit_up] drops below epsilon, returning the window
// midpoints.

#include <cstddef>
#include <vector>

#include "pom/error.hpp"
#include "pom/types.hpp"

namespace pom::detail {

struct ThresholdSearchState {
  double kappa_low = 0.0;
  double kappa_up = 0.0;
  std::size_t iterations = 0;
  double max_error = 0.0;
};

// unit: standardized score c -> (0,1), increasing in c
template <class UnitFn>
ThresholdSearchState threshold_bisection(const IndependentGaussianBelief& b,
                                         double epsilon, std::size_t max_iter,
                                         double kappa_low, double kappa_up,
                                         UnitFn&& unit,
                                         std::vector<double>& mid_out) {
  const std::size_t n = b.size();
  const std::vector<double>& mu = b.mu();
  const std::vector<double>& sigma = b.sigma();

  ThresholdSearchState st;
  st.kappa_low = kappa_low;
  st.kappa_up = kappa_up;
  st.max_error = epsilon;  // enter the loop at least once

  while (st.max_error >= epsilon) {
    if (st.iterations >= max_iter)
      throw PomError(PomErrc::max_iterations_exceeded,
                     "threshold bisection did not reach epsilon within " +
                         std::to_string(max_iter) + " iterations");
    const double kappa = 0.5 * st.kappa_up + 0.5 * st.kappa_low;
    double s = 0.0;
    for (std::size_t x = 0; x < n; ++x) s += unit((mu[x] - kappa) / sigma[x]);
    if (s > 1.0)
      st.kappa_low = kappa;
    else
      st.kappa_up = kappa;
    double err = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const double d = unit((mu[x] - st.kappa_low) / sigma[x]) -
                       unit((mu[x] - st.kappa_up) / sigma[x]);
      if (d > err) err = d;
    }
    st.max_error = err;
    ++st.iterations;
  }

  mid_out.resize(n);
  for (std::size_t x = 0; x < n; ++x)
    mid_out[x] = 0.5 * unit((mu[x] - st.kappa_low) / sigma[x]) +
                 0.5 * unit((mu[x] - st.kappa_up) / sigma[x]);
  return st;
}

}  // namespace pom::detail
