#pragma once

// Bayesian-optimization driven suites: fidelity during BO on a GP sample or
// the drop-wave function (ground truth via capped TS-MC on the full
// posterior), and Entropy Search with a swappable PoM backend.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pom/bench.hpp"
#include "pom/gp.hpp"

namespace pom::bench {

enum class Acquisition { thompson, expected_improvement };

namespace detail {

// posterior sigma floor keeps the sigma > 0 belief invariant at exactly
// conditioned points
inline IndependentGaussianBelief diag_belief(const std::vector<double>& mu,
                                             const std::vector<double>& diag,
                                             double amplitude) {
  const double floor = 1e-6 * amplitude;
  std::vector<double> sigma(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i)
    sigma[i] = std::max(std::sqrt(std::max(diag[i], 0.0)), floor);
  return IndependentGaussianBelief(mu, std::move(sigma));
}

inline IndependentGaussianBelief diag_belief(const FullGaussianBelief& b,
                                             double amplitude) {
  std::vector<double> diag(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) diag[i] = b.cov_at(i, i);
  return diag_belief(b.mu(), diag, amplitude);
}

inline std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace detail

struct BoFidelityConfig {
  GpModel model;
  std::string objective = "gp-sample";  // or "dropwave"
  Acquisition acq = Acquisition::thompson;
  std::size_t steps = 30;
  std::size_t warmup = 0;  // random observations before BO starts
  std::size_t seeds = 5;
  double alpha = 10.0;     // estimator eps = 1/(alpha |X|)
  double gt_alpha = 10.0;  // TS-MC ground truth eps = 1/(gt_alpha |X|)
  double gt_delta = 0.05;
  std::size_t gt_sample_cap = 100000;
  std::vector<Method> estimators{Method::flite, Method::alite, Method::fvapor,
                                 Method::est};
  double grid_cost_budget = 6.0e8;
  unsigned threads = 1;
  std::uint64_t master_seed = 20240004;
  std::string suite_name = "gp1d";
};

inline std::vector<BenchRecord> run_bo_fidelity_suite(const BoFidelityConfig& cfg) {
  cfg.model.validate();
  const std::size_t n = cfg.model.npoints();
  const SeededRng master(cfg.master_seed);
  std::vector<std::vector<BenchRecord>> per_seed(cfg.seeds);

  detail::parallel_cells(cfg.seeds, cfg.threads, [&](std::size_t si) {
    SeededRng rng = master.derive(0xb0, si);
    const std::string instance = cfg.suite_name + "-s" + std::to_string(si);
    try {
    std::vector<double> f_true;
    if (cfg.objective == "dropwave") {
      if (cfg.model.dim != 2)
        throw PomError(PomErrc::invalid_config, "dropwave needs a 2-D grid");
      f_true.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        f_true[i] = dropwave(cfg.model.points[2 * i], cfg.model.points[2 * i + 1]);
    } else {
      f_true = gp_prior_sample(cfg.model, rng);
    }

    GpData data;
    for (std::size_t w = 0; w < cfg.warmup; ++w) {
      const auto idx = static_cast<std::size_t>(rng.uniform01() *
                                                static_cast<double>(n));
      const std::size_t x = std::min(idx, n - 1);
      data.idx.push_back(x);
      data.y.push_back(f_true[x] + cfg.model.noise_std * rng.normal());
    }

    const double eps = 1.0 / (cfg.alpha * static_cast<double>(n));
    for (std::size_t step = 1; step <= cfg.steps; ++step) {
      const FullGaussianBelief post = gp_posterior(cfg.model, data);

      // acquisition
      std::size_t query = 0;
      if (cfg.acq == Acquisition::thompson) {
        SeededRng draw_rng = rng.derive(0x75, step);
        const PomEstimate sample = estimate_tsmc_fixed(post, 1, draw_rng);
        query = detail::argmax_lowest(sample.probs);  // the single argmax draw
      } else {
        double best_y = -std::numeric_limits<double>::infinity();
        for (double y : data.y) best_y = std::max(best_y, y);
        if (!std::isfinite(best_y)) best_y = 0.0;
        std::vector<double> ei(n, 0.0);
        for (std::size_t x = 0; x < n; ++x) {
          const double s = std::sqrt(std::max(post.cov_at(x, x), 0.0));
          if (s <= 0.0) continue;
          const double g = (post.mu()[x] - best_y) / s;
          ei[x] = s * (g * gauss::cdf(g) + gauss::pdf(g));
        }
        query = detail::argmax_lowest(ei);
      }
      data.idx.push_back(query);
      data.y.push_back(f_true[query] + cfg.model.noise_std * rng.normal());

      // fidelity of the estimators on the post-query posterior
      const FullGaussianBelief post2 = gp_posterior(cfg.model, data);
      const IndependentGaussianBelief diag =
          detail::diag_belief(post2, cfg.model.amplitude);

      const double gt_eps = 1.0 / (cfg.gt_alpha * static_cast<double>(n));
      const std::size_t want = tsmc_sample_count(gt_eps, cfg.gt_delta);
      SeededRng gt_rng = rng.derive(0x67, step);
      const PomEstimate gt = estimate_tsmc_fixed(
          post2, std::min(want, cfg.gt_sample_cap), gt_rng);
      const double h_true = shannon_entropy(gt.probs);

      for (Method m : cfg.estimators) {
        BenchRecord rec;
        rec.estimator = to_string(m);
        rec.instance_id = instance;
        rec.seed = si;
        rec.domain_size = n;
        rec.bo_step = static_cast<int>(step);
        try {
          ConvergenceConfig ec = ConvergenceConfig::with_epsilon(eps);
          if (m == Method::est || m == Method::indep)
            ec.epsilon = epsilon_for_grid_budget(diag, std::min(eps, 0.25),
                                                 cfg.grid_cost_budget);
          const auto t0 = std::chrono::steady_clock::now();
          const PomEstimate e = estimate(m, diag, ec);
          rec.wall_time_s = detail::seconds_since(t0);
          rec.tv = tv_distance(e.probs, gt.probs);
          rec.entropy_est = shannon_entropy(e.probs);
          rec.entropy_true = h_true;
        } catch (const PomError& err) {
          rec.error = err.what();
        }
        per_seed[si].push_back(std::move(rec));
      }
    }
    } catch (const std::exception& fatal) {
      BenchRecord rec;
      rec.estimator = "suite";
      rec.instance_id = instance;
      rec.seed = si;
      rec.domain_size = n;
      rec.error = fatal.what();
      per_seed[si].push_back(std::move(rec));
    }
  });

  std::vector<BenchRecord> out;
  for (auto& v : per_seed)
    for (auto& r : v) out.push_back(std::move(r));
  return out;
}

// One Entropy Search acquisition: for each candidate, draw n_fantasy
// observations from the posterior predictive, condition, estimate the PoM
// entropy with the chosen backend, average, and return the argmin (ties to
// the lowest index).
inline std::size_t entropy_search_step(const GpModel& model, const GpData& data,
                                       Method pom_backend, std::size_t n_fantasy,
                                       SeededRng& rng, double backend_alpha = 10.0,
                                       std::size_t tsmc_samples = 4) {
  if (pom_backend != Method::flite && pom_backend != Method::tsmc)
    throw PomError(PomErrc::invalid_config,
                   "entropy search backend must be flite or tsmc");
  if (n_fantasy < 1)
    throw PomError(PomErrc::invalid_config, "n_fantasy must be >= 1");
  const FullGaussianBelief post = gp_posterior(model, data);
  const std::size_t n = post.size();
  const double eps = 1.0 / (backend_alpha * static_cast<double>(n));
  const double noise2 = model.noise_std * model.noise_std;
  const double amp2 = model.amplitude * model.amplitude;

  double best_h = std::numeric_limits<double>::infinity();
  std::size_t best_x = 0;
  std::vector<double> mu2(n), diag2(n), cov2;
  for (std::size_t x = 0; x < n; ++x) {
    const double v_pred = std::max(post.cov_at(x, x) + noise2, 1e-12 * amp2);
    const double inv_v = 1.0 / v_pred;

    if (pom_backend == Method::tsmc) {
      cov2.assign(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          cov2[i * n + j] =
              post.cov_at(i, j) - post.cov_at(i, x) * post.cov_at(x, j) * inv_v;
      for (std::size_t i = 0; i < n; ++i)
        cov2[i * n + i] = std::max(cov2[i * n + i], 0.0);
    } else {
      for (std::size_t i = 0; i < n; ++i)
        diag2[i] = post.cov_at(i, i) - post.cov_at(i, x) * post.cov_at(x, i) * inv_v;
    }

    double h_sum = 0.0;
    for (std::size_t j = 0; j < n_fantasy; ++j) {
      const double y = post.mu()[x] + std::sqrt(v_pred) * rng.normal();
      const double shift = (y - post.mu()[x]) * inv_v;
      for (std::size_t i = 0; i < n; ++i)
        mu2[i] = post.mu()[i] + post.cov_at(i, x) * shift;
      if (pom_backend == Method::flite) {
        const IndependentGaussianBelief cond =
            detail::diag_belief(mu2, diag2, model.amplitude);
        h_sum += shannon_entropy(
            estimate_flite(cond, ConvergenceConfig::with_epsilon(eps)).probs);
      } else {
        FullGaussianBelief cond(mu2, cov2);
        h_sum += shannon_entropy(
            estimate_tsmc_fixed(cond, tsmc_samples, rng).probs);
      }
    }
    const double h = h_sum / static_cast<double>(n_fantasy);
    if (h < best_h) {
      best_h = h;
      best_x = x;
    }
  }
  return best_x;
}

struct EntropySearchConfig {
  GpModel model;  // default set by make_default() below
  std::size_t steps = 15;
  std::size_t seeds = 10;
  std::size_t n_fantasy = 5;
  std::size_t tsmc_samples = 4;
  double backend_alpha = 10.0;
  unsigned threads = 1;
  std::uint64_t master_seed = 20240005;

  static EntropySearchConfig make_default(std::size_t domain = 100) {
    EntropySearchConfig c;
    c.model = make_gp_1d(KernelType::squared_exponential, 0.02, 1.0, 0.2,
                         domain, 0.0, 1.0);
    return c;
  }
};

// Per (seed, step) row: the tracked PoM entropy (estimate_independence on the
// diagonal posterior, the same evaluator for both backends) and the
// acquisition wall time. estimator is "es-flite" / "es-tsmc".
inline std::vector<BenchRecord> run_entropy_search_suite(
    const EntropySearchConfig& cfg, Method backend) {
  cfg.model.validate();
  const std::size_t n = cfg.model.npoints();
  const std::string tag = std::string("es-") + to_string(backend);
  std::vector<std::vector<BenchRecord>> per_seed(cfg.seeds);
  const SeededRng master(cfg.master_seed);

  detail::parallel_cells(cfg.seeds, cfg.threads, [&](std::size_t si) {
    SeededRng rng = master.derive(0xe5, si);
    try {
    const std::vector<double> f_true = gp_prior_sample(cfg.model, rng);
    GpData data;
    for (std::size_t step = 1; step <= cfg.steps; ++step) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::size_t x =
          entropy_search_step(cfg.model, data, backend, cfg.n_fantasy, rng,
                              cfg.backend_alpha, cfg.tsmc_samples);
      const double wall = detail::seconds_since(t0);
      data.idx.push_back(x);
      data.y.push_back(f_true[x] + cfg.model.noise_std * rng.normal());

      const FullGaussianBelief post = gp_posterior(cfg.model, data);
      const IndependentGaussianBelief diag =
          detail::diag_belief(post, cfg.model.amplitude);
      const double h = shannon_entropy(
          estimate_independence(
              diag, ConvergenceConfig::with_epsilon(
                        epsilon_for_grid_budget(diag, 1e-4, 2.0e8)))
              .probs);

      BenchRecord rec;
      rec.estimator = tag;
      rec.instance_id = "es-s" + std::to_string(si);
      rec.seed = si;
      rec.domain_size = n;
      rec.bo_step = static_cast<int>(step);
      rec.entropy_est = h;
      rec.entropy_true = h;
      rec.wall_time_s = wall;
      per_seed[si].push_back(std::move(rec));
    }
    } catch (const std::exception& fatal) {
      BenchRecord rec;
      rec.estimator = tag;
      rec.instance_id = "es-s" + std::to_string(si);
      rec.seed = si;
      rec.domain_size = n;
      rec.error = fatal.what();
      per_seed[si].push_back(std::move(rec));
    }
  });

  std::vector<BenchRecord> out;
  for (auto& v : per_seed)
    for (auto& r : v) out.push_back(std::move(r));
  return out;
}

}  // namespace pom::bench
