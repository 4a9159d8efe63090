#pragma once

// Shared data model: beliefs (validated at construction), estimator output,
// convergence configuration and the reproducible RNG.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pom/error.hpp"
#include "pom/gauss.hpp"

namespace pom {

enum class Method { flite, alite, fvapor, est, indep, tsmc };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::flite: return "flite";
    case Method::alite: return "alite";
    case Method::fvapor: return "fvapor";
    case Method::est: return "est";
    case Method::indep: return "indep";
    case Method::tsmc: return "tsmc";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "flite") return Method::flite;
  if (s == "alite") return Method::alite;
  if (s == "fvapor") return Method::fvapor;
  if (s == "est") return Method::est;
  if (s == "indep") return Method::indep;
  if (s == "tsmc") return Method::tsmc;
  return std::nullopt;
}

inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Generator identity: std::mt19937_64 seeded with the stored seed; uniforms
// take the top 53 bits; normals are Phi^{-1}(uniform). The same seed yields
// the same stream on any conforming implementation (normals additionally
// depend on correctly rounded libm erfc/log, which holds on mainstream libms).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return gen_(); }

  // strictly inside (0, 1)
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double normal() { return gauss::quantile(uniform01()); }

  // scheduling-independent substream for a (cell, repetition) pair
  SeededRng derive(std::uint64_t a, std::uint64_t b = 0) const {
    return SeededRng(mix64(seed_ ^ mix64(a ^ mix64(b))));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

class IndependentGaussianBelief {
 public:
  IndependentGaussianBelief(std::vector<double> mu, std::vector<double> sigma)
      : mu_(std::move(mu)), sigma_(std::move(sigma)) {
    if (mu_.size() != sigma_.size())
      throw PomError(PomErrc::length_mismatch,
                     "mu has " + std::to_string(mu_.size()) + " entries, sigma has " +
                         std::to_string(sigma_.size()));
    if (mu_.size() < 2)
      throw PomError(PomErrc::domain_too_small, "need at least 2 arms");
    for (std::size_t i = 0; i < mu_.size(); ++i)
      if (!std::isfinite(mu_[i]))
        throw PomError(PomErrc::non_finite, "mu entry not finite", i);
    for (std::size_t i = 0; i < sigma_.size(); ++i) {
      if (!std::isfinite(sigma_[i]))
        throw PomError(PomErrc::non_finite, "sigma entry not finite", i);
      if (!(sigma_[i] > 0.0))
        throw PomError(PomErrc::non_positive_sigma, "sigma must be > 0", i);
    }
    mu_min_ = *std::min_element(mu_.begin(), mu_.end());
    mu_max_ = *std::max_element(mu_.begin(), mu_.end());
    sigma_min_ = *std::min_element(sigma_.begin(), sigma_.end());
    sigma_max_ = *std::max_element(sigma_.begin(), sigma_.end());
  }

  std::size_t size() const noexcept { return mu_.size(); }
  const std::vector<double>& mu() const noexcept { return mu_; }
  const std::vector<double>& sigma() const noexcept { return sigma_; }
  double mu_min() const noexcept { return mu_min_; }
  double mu_max() const noexcept { return mu_max_; }
  double sigma_min() const noexcept { return sigma_min_; }
  double sigma_max() const noexcept { return sigma_max_; }

 private:
  std::vector<double> mu_, sigma_;
  double mu_min_ = 0, mu_max_ = 0, sigma_min_ = 0, sigma_max_ = 0;
};

inline IndependentGaussianBelief validate_belief(std::vector<double> mu,
                                                 std::vector<double> sigma) {
  return IndependentGaussianBelief(std::move(mu), std::move(sigma));
}

class FullGaussianBelief {
 public:
  // cov is row-major n x n
  FullGaussianBelief(std::vector<double> mu, std::vector<double> cov)
      : mu_(std::move(mu)), cov_(std::move(cov)) {
    const std::size_t n = mu_.size();
    if (n < 2) throw PomError(PomErrc::domain_too_small, "need at least 2 arms");
    if (cov_.size() != n * n)
      throw PomError(PomErrc::length_mismatch,
                     "cov must be " + std::to_string(n) + "x" + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(mu_[i]))
        throw PomError(PomErrc::non_finite, "mu entry not finite", i);
    for (std::size_t i = 0; i < cov_.size(); ++i)
      if (!std::isfinite(cov_[i]))
        throw PomError(PomErrc::non_finite, "cov entry not finite", i);
    for (std::size_t i = 0; i < n; ++i) {
      if (cov_[i * n + i] < 0.0)
        throw PomError(PomErrc::not_psd, "negative diagonal entry", i);
      for (std::size_t j = i + 1; j < n; ++j)
        if (std::abs(cov_[i * n + j] - cov_[j * n + i]) > 1e-10)
          throw PomError(PomErrc::not_symmetric, "cov not symmetric within 1e-10", i);
    }
  }

  std::size_t size() const noexcept { return mu_.size(); }
  const std::vector<double>& mu() const noexcept { return mu_; }
  const std::vector<double>& cov() const noexcept { return cov_; }
  double cov_at(std::size_t i, std::size_t j) const noexcept {
    return cov_[i * size() + j];
  }

  IndependentGaussianBelief diagonal_belief() const {
    const std::size_t n = size();
    std::vector<double> sigma(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = cov_at(i, i);
      if (!(v > 0.0))
        throw PomError(PomErrc::non_positive_sigma,
                       "diagonal projection needs cov_xx > 0", i);
      sigma[i] = std::sqrt(v);
    }
    return IndependentGaussianBelief(mu_, std::move(sigma));
  }

 private:
  std::vector<double> mu_;
  std::vector<double> cov_;
};

// Accuracy target: either epsilon directly or alpha with eps = 1/(alpha*|X|).
struct ConvergenceConfig {
  std::optional<double> epsilon;
  std::optional<double> alpha;
  std::size_t max_iterations = 200;
  double mc_delta = 0.05;
  std::size_t mc_sample_cap = 100'000'000;
  std::size_t grid_point_cap = std::size_t(1) << 24;

  static ConvergenceConfig with_epsilon(double eps) {
    ConvergenceConfig c;
    c.epsilon = eps;
    return c;
  }
  static ConvergenceConfig with_alpha(double a) {
    ConvergenceConfig c;
    c.alpha = a;
    return c;
  }

  double resolve_epsilon(std::size_t domain_size) const {
    if (epsilon.has_value() == alpha.has_value())
      throw PomError(PomErrc::invalid_config,
                     "exactly one of epsilon/alpha must be set");
    double eps = epsilon ? *epsilon
                         : 1.0 / (*alpha * static_cast<double>(domain_size));
    if (!(eps > 0.0) || !std::isfinite(eps))
      throw PomError(PomErrc::invalid_config, "resolved epsilon must be positive");
    return eps;
  }
};

struct PomEstimate {
  std::vector<double> probs;  // normalized to sum 1
  Method method = Method::flite;
  std::optional<double> threshold;  // kappa*, nu* or kappa~
  std::size_t iterations = 0;       // bisection steps, depth, or MC samples
  std::optional<double> max_error_bound;
  std::vector<double> raw;           // unnormalized values when meaningful
  std::vector<double> lower, upper;  // A-LITE per-arm interval bounds
  std::optional<double> mc_epsilon, mc_delta;  // TS-MC (eps, delta) contract
};

namespace detail {

inline std::vector<double> normalized(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  if (!(s > 0.0) || !std::isfinite(s))
    throw PomError(PomErrc::not_normalized, "nonpositive normalization mass");
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / s;
  return out;
}

}  // namespace detail

}  // namespace pom
