#pragma once

// Variational objectives whose simplex maximizers are F-LITE and F-VAPOR:
//   W(p) = sum_x p_x (mu_x + sqrt(2 I~(p_x)) sigma_x),  I~ the quasi-surprisal
//   V(p) = sum_x p_x (mu_x + sqrt(2 ln(1/p_x)) sigma_x)
// I~(u) = (phi(Phi^{-1}(u))/u)^2 / 2 behaves like -ln u and satisfies
// I~(1) = 0; terms with p_x in {0, 1} take their continuous limits.

#include <cmath>
#include <cstddef>
#include <vector>

#include "pom/error.hpp"
#include "pom/gauss.hpp"
#include "pom/types.hpp"

namespace pom {

inline double quasi_surprisal(double u) {
  if (!(u > 0.0 && u <= 1.0))
    throw PomError(PomErrc::domain_error, "quasi_surprisal requires u in (0,1]");
  if (u == 1.0) return 0.0;
  const double z = gauss::quantile(u);
  if (u >= 1e-3) {
    const double r = gauss::pdf(z) / u;
    return 0.5 * r * r;
  }
  // log space keeps phi(z)/u stable when both factors underflow territory
  const double lr = gauss::log_pdf(z) - std::log(u);
  return 0.5 * std::exp(2.0 * lr);
}

namespace detail {

inline void check_simplex(const IndependentGaussianBelief& b,
                          const std::vector<double>& p) {
  if (p.size() != b.size())
    throw PomError(PomErrc::length_mismatch, "probability vector length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0) || !(p[i] <= 1.0) || !std::isfinite(p[i]))
      throw PomError(PomErrc::simplex_violation, "entry outside [0,1]", i);
    sum += p[i];
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw PomError(PomErrc::simplex_violation,
                   "entries sum to " + std::to_string(sum));
}

}  // namespace detail

inline double objective_w(const IndependentGaussianBelief& b,
                          const std::vector<double>& p) {
  detail::check_simplex(b, p);
  double w = 0.0;
  for (std::size_t x = 0; x < b.size(); ++x) {
    if (p[x] == 0.0) continue;
    w += p[x] * (b.mu()[x] +
                 std::sqrt(2.0 * quasi_surprisal(p[x])) * b.sigma()[x]);
  }
  return w;
}

inline double objective_v(const IndependentGaussianBelief& b,
                          const std::vector<double>& p) {
  detail::check_simplex(b, p);
  double v = 0.0;
  for (std::size_t x = 0; x < b.size(); ++x) {
    if (p[x] == 0.0) continue;
    v += p[x] * (b.mu()[x] +
                 std::sqrt(-2.0 * std::log(p[x])) * b.sigma()[x]);
  }
  return v;
}

}  // namespace pom
