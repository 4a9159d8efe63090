#pragma once

// Gaussian-process prior/posterior on a fixed grid of points, for the
// benchmark suites: squared-exponential, exponential and Matern 5/2 kernels,
// homoscedastic Gaussian noise, dense conditioning.

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pom/error.hpp"
#include "pom/types.hpp"

namespace pom {

enum class KernelType { squared_exponential, exponential, matern52 };

inline const char* to_string(KernelType k) {
  switch (k) {
    case KernelType::squared_exponential: return "squared-exponential";
    case KernelType::exponential: return "exponential";
    case KernelType::matern52: return "matern52";
  }
  return "?";
}

struct GpModel {
  KernelType kernel = KernelType::squared_exponential;
  double length_scale = 1.0;
  double amplitude = 1.0;
  double noise_std = 0.0;
  std::size_t dim = 1;
  std::vector<double> points;  // flattened, point i = points[i*dim .. i*dim+dim)

  std::size_t npoints() const { return dim == 0 ? 0 : points.size() / dim; }

  void validate() const {
    if (!(length_scale > 0.0) || !(amplitude > 0.0) || !(noise_std >= 0.0))
      throw PomError(PomErrc::invalid_config,
                     "kernel needs length_scale > 0, amplitude > 0, noise >= 0");
    if (dim != 1 && dim != 2)
      throw PomError(PomErrc::invalid_config, "grid must be 1-D or 2-D");
    if (npoints() < 2)
      throw PomError(PomErrc::domain_too_small, "grid needs at least 2 points");
  }
};

inline GpModel make_gp_1d(KernelType k, double length_scale, double amplitude,
                          double noise_std, std::size_t n, double lo, double hi) {
  GpModel m;
  m.kernel = k;
  m.length_scale = length_scale;
  m.amplitude = amplitude;
  m.noise_std = noise_std;
  m.dim = 1;
  m.points.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    m.points[i] = lo + (hi - lo) * static_cast<double>(i) /
                           static_cast<double>(n - 1);
  m.validate();
  return m;
}

inline GpModel make_gp_2d(KernelType k, double length_scale, double amplitude,
                          double noise_std, std::size_t n_side, double lo,
                          double hi) {
  GpModel m;
  m.kernel = k;
  m.length_scale = length_scale;
  m.amplitude = amplitude;
  m.noise_std = noise_std;
  m.dim = 2;
  m.points.reserve(n_side * n_side * 2);
  for (std::size_t i = 0; i < n_side; ++i)
    for (std::size_t j = 0; j < n_side; ++j) {
      m.points.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(n_side - 1));
      m.points.push_back(lo + (hi - lo) * static_cast<double>(j) /
                                  static_cast<double>(n_side - 1));
    }
  m.validate();
  return m;
}

inline double kernel_value(const GpModel& m, std::size_t i, std::size_t j) {
  double r2 = 0.0;
  for (std::size_t d = 0; d < m.dim; ++d) {
    const double dx = m.points[i * m.dim + d] - m.points[j * m.dim + d];
    r2 += dx * dx;
  }
  const double a2 = m.amplitude * m.amplitude;
  const double r = std::sqrt(r2) / m.length_scale;
  switch (m.kernel) {
    case KernelType::squared_exponential: return a2 * std::exp(-0.5 * r * r);
    case KernelType::exponential: return a2 * std::exp(-r);
    case KernelType::matern52: {
      const double sr = std::sqrt(5.0) * r;
      return a2 * (1.0 + sr + sr * sr / 3.0) * std::exp(-sr);
    }
  }
  return 0.0;
}

// dense kernel matrix with the stabilizing diagonal jitter 1e-8 * amplitude^2
inline Eigen::MatrixXd kernel_matrix(const GpModel& m) {
  m.validate();
  const auto n = static_cast<Eigen::Index>(m.npoints());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = kernel_value(m, static_cast<std::size_t>(i),
                                    static_cast<std::size_t>(j));
      k(i, j) = v;
      k(j, i) = v;
    }
    k(i, i) += 1e-8 * m.amplitude * m.amplitude;
  }
  return k;
}

struct GpData {
  std::vector<std::size_t> idx;  // grid indices of the observations
  std::vector<double> y;
};

// Standard conditioning on noisy observations at grid points; zero prior mean.
inline FullGaussianBelief gp_posterior(const GpModel& m, const GpData& data) {
  const Eigen::MatrixXd k = kernel_matrix(m);
  const auto n = static_cast<Eigen::Index>(m.npoints());
  if (data.idx.size() != data.y.size())
    throw PomError(PomErrc::length_mismatch, "observation idx/y mismatch");

  Eigen::MatrixXd cov = k;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  if (!data.idx.empty()) {
    const auto mobs = static_cast<Eigen::Index>(data.idx.size());
    Eigen::MatrixXd k_star(n, mobs);  // K(:, obs)
    Eigen::MatrixXd a(mobs, mobs);    // K(obs, obs) + noise^2 I
    Eigen::VectorXd y(mobs);
    for (Eigen::Index c = 0; c < mobs; ++c) {
      const std::size_t ic = data.idx[static_cast<std::size_t>(c)];
      if (ic >= m.npoints())
        throw PomError(PomErrc::index_out_of_range, "observation off the grid", ic);
      k_star.col(c) = k.col(static_cast<Eigen::Index>(ic));
      y[c] = data.y[static_cast<std::size_t>(c)];
      for (Eigen::Index r = 0; r < mobs; ++r)
        a(r, c) = k(static_cast<Eigen::Index>(data.idx[static_cast<std::size_t>(r)]),
                    static_cast<Eigen::Index>(ic));
      a(c, c) += m.noise_std * m.noise_std;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
      throw PomError(PomErrc::not_psd, "observation Gram matrix not PSD after jitter");
    mean = k_star * llt.solve(y);
    cov = k - k_star * llt.solve(k_star.transpose());
    cov = 0.5 * (cov + cov.transpose()).eval();
  }

  std::vector<double> mu(static_cast<std::size_t>(n));
  std::vector<double> cov_v(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    mu[static_cast<std::size_t>(i)] = mean[i];
    for (Eigen::Index j = 0; j < n; ++j)
      cov_v[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(j)] = cov(i, j);
  }
  return FullGaussianBelief(std::move(mu), std::move(cov_v));
}

// One draw of f ~ N(0, K) on the grid (for sampling objective functions).
inline std::vector<double> gp_prior_sample(const GpModel& m, SeededRng& rng) {
  const Eigen::MatrixXd k = kernel_matrix(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  if (es.info() != Eigen::Success)
    throw PomError(PomErrc::not_psd, "prior kernel eigendecomposition failed");
  Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
  const auto n = k.rows();
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
  Eigen::VectorXd f = es.eigenvectors() * (lambda.cwiseSqrt().asDiagonal() * z);
  return std::vector<double>(f.data(), f.data() + n);
}

}  // namespace pom
