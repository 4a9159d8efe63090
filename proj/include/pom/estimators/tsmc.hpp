#pragma once

// Exhaustive Thompson-sampling Monte Carlo: factorize the covariance once
// via a symmetric eigendecomposition, draw correlated samples, histogram the
// argmaxes. Unbiased and consistent; the Hoeffding sample count
// n = ceil(ln(2/delta) / (2 eps^2)) makes every arm eps-accurate with
// probability at least 1 - delta.

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pom/error.hpp"
#include "pom/types.hpp"

namespace pom {

// Fixed-budget variant (used e.g. by the Entropy Search backend, which runs
// a constant 4-sample budget instead of an (eps, delta) contract).
inline PomEstimate estimate_tsmc_fixed(const FullGaussianBelief& b,
                                       std::size_t n_samples, SeededRng& rng) {
  const std::size_t n = b.size();
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      cov(b.cov().data(), ni, ni);
  Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw PomError(PomErrc::not_psd, "eigendecomposition failed");
  Eigen::VectorXd lambda = es.eigenvalues();
  const double lmax = std::max(lambda.maxCoeff(), 0.0);
  const double floor = -1e-10 * lmax;
  for (Eigen::Index i = 0; i < ni; ++i) {
    if (lambda[i] < floor)
      throw PomError(PomErrc::not_psd,
                     "eigenvalue " + std::to_string(lambda[i]) +
                         " below the PSD tolerance");
    lambda[i] = std::max(lambda[i], 0.0);
  }
  // Sigma^{1/2} = U D^{1/2}: (U D^{1/2})(U D^{1/2})^T = Sigma
  Eigen::MatrixXd root =
      es.eigenvectors() * lambda.cwiseSqrt().asDiagonal();

  Eigen::Map<const Eigen::VectorXd> mu(b.mu().data(), ni);
  std::vector<std::size_t> counts(n, 0);

  constexpr Eigen::Index kBatch = 128;
  Eigen::MatrixXd z(ni, kBatch), f(ni, kBatch);
  std::size_t done = 0;
  while (done < n_samples) {
    const Eigen::Index m =
        static_cast<Eigen::Index>(std::min<std::size_t>(kBatch, n_samples - done));
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index i = 0; i < ni; ++i) z(i, j) = rng.normal();
    f.leftCols(m).noalias() = root * z.leftCols(m);
    f.leftCols(m).colwise() += mu;
    for (Eigen::Index j = 0; j < m; ++j) {
      // ties go to the lowest index
      Eigen::Index best = 0;
      double bv = f(0, j);
      for (Eigen::Index i = 1; i < ni; ++i)
        if (f(i, j) > bv) {
          bv = f(i, j);
          best = i;
        }
      ++counts[static_cast<std::size_t>(best)];
    }
    done += static_cast<std::size_t>(m);
  }

  PomEstimate out;
  out.method = Method::tsmc;
  out.probs.resize(n);
  for (std::size_t x = 0; x < n; ++x)
    out.probs[x] = static_cast<double>(counts[x]) / static_cast<double>(n_samples);
  out.iterations = n_samples;
  return out;
}

inline std::size_t tsmc_sample_count(double epsilon, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw PomError(PomErrc::invalid_config, "mc_delta must lie in (0,1)");
  return static_cast<std::size_t>(
      std::ceil(std::log(2.0 / delta) / (2.0 * epsilon * epsilon)));
}

inline PomEstimate estimate_tsmc(const FullGaussianBelief& b,
                                 const ConvergenceConfig& cfg, SeededRng& rng) {
  const double eps = cfg.resolve_epsilon(b.size());
  const std::size_t n_samples = tsmc_sample_count(eps, cfg.mc_delta);
  if (n_samples > cfg.mc_sample_cap)
    throw PomError(PomErrc::sample_budget_overflow,
                   std::to_string(n_samples) + " samples exceed the cap of " +
                       std::to_string(cfg.mc_sample_cap));
  PomEstimate out = estimate_tsmc_fixed(b, n_samples, rng);
  out.mc_epsilon = eps;
  out.mc_delta = cfg.mc_delta;
  return out;
}

}  // namespace pom
