#pragma once

// Benchmark harness: synthetic instance generators, the fidelity suite
// (TV / entropy vs a ground-truth estimator), the recall-selection suite and
// the runtime scaling sweep. Suites are deterministic in their statistical
// outputs given (config, master seed): every cell derives its own RNG from
// hash(master_seed, instance, seed), so results do not depend on scheduling.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pom/estimators.hpp"
#include "pom/metrics.hpp"
#include "pom/types.hpp"

namespace pom::bench {

struct BenchRecord {
  std::string estimator;
  std::string instance_id;
  std::uint64_t seed = 0;
  std::size_t domain_size = 0;
  std::optional<int> bo_step;
  double tv = std::numeric_limits<double>::quiet_NaN();
  double entropy_est = std::numeric_limits<double>::quiet_NaN();
  double entropy_true = std::numeric_limits<double>::quiet_NaN();
  double wall_time_s = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // empty on success; "timeout" for budget markers
};

struct SummaryRow {
  std::string estimator;
  std::size_t rows = 0;  // successful rows
  double tv_mean = 0, tv_stderr = 0;
  double entropy_rmsre = 0;
  double wall_mean_s = 0;
};

inline std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
  std::map<std::string, std::vector<const BenchRecord*>> by_est;
  for (const auto& r : records)
    if (r.error.empty()) by_est[r.estimator].push_back(&r);
  std::vector<SummaryRow> out;
  for (const auto& [name, rows] : by_est) {
    SummaryRow s;
    s.estimator = name;
    s.rows = rows.size();
    double tv_sum = 0, tv_sq = 0, wall = 0, rel_sq = 0;
    std::size_t n_tv = 0, n_ent = 0;
    for (const auto* r : rows) {
      if (std::isfinite(r->tv)) {
        tv_sum += r->tv;
        tv_sq += r->tv * r->tv;
        ++n_tv;
      }
      if (std::isfinite(r->entropy_est) && std::isfinite(r->entropy_true) &&
          r->entropy_true != 0.0) {
        const double rel = (r->entropy_est - r->entropy_true) / r->entropy_true;
        rel_sq += rel * rel;
        ++n_ent;
      }
      if (std::isfinite(r->wall_time_s)) wall += r->wall_time_s;
    }
    if (n_tv > 0) {
      s.tv_mean = tv_sum / static_cast<double>(n_tv);
      if (n_tv > 1) {
        const double var =
            (tv_sq - tv_sum * tv_sum / static_cast<double>(n_tv)) /
            static_cast<double>(n_tv - 1);
        s.tv_stderr = std::sqrt(std::max(var, 0.0) / static_cast<double>(n_tv));
      }
    }
    if (n_ent > 0) s.entropy_rmsre = std::sqrt(rel_sq / static_cast<double>(n_ent));
    if (!rows.empty()) s.wall_mean_s = wall / static_cast<double>(rows.size());
    out.push_back(std::move(s));
  }
  return out;
}

// The four synthetic posterior families: "main" mu ~ U[0,5], sigma ~ U[1/2,10];
// "small-std" sigma ~ U[1/2,2]; "fixed-std" sigma = 1/2; "small-mean"
// mu ~ U[0,1/10], sigma = 1/2.
inline IndependentGaussianBelief synthetic_belief(std::size_t size, SeededRng& rng,
                                                  std::string_view family) {
  double mu_hi = 5.0, sig_lo = 0.5, sig_hi = 10.0;
  if (family == "main") {
  } else if (family == "small-std") {
    sig_hi = 2.0;
  } else if (family == "fixed-std") {
    sig_hi = sig_lo;
  } else if (family == "small-mean") {
    mu_hi = 0.1;
    sig_hi = sig_lo;
  } else {
    throw PomError(PomErrc::unknown_family,
                   "unknown synthetic family '" + std::string(family) + "'");
  }
  std::vector<double> mu(size), sigma(size);
  for (std::size_t i = 0; i < size; ++i) {
    mu[i] = rng.uniform(0.0, mu_hi);
    sigma[i] = sig_lo == sig_hi ? sig_lo : rng.uniform(sig_lo, sig_hi);
  }
  return IndependentGaussianBelief(std::move(mu), std::move(sigma));
}

inline double dropwave(double x1, double x2) {
  const double r2 = x1 * x1 + x2 * x2;
  return (1.0 + std::cos(12.0 * std::sqrt(r2))) / (0.5 * r2 + 2.0);
}

// Largest epsilon' >= requested such that the integration grid costs at most
// cost_budget ~ grid_cells * |X| table evaluations; clamped to (0, 1/4].
// Used for the grid-backed reference methods only (the realized trapezoid
// error is O(eps^2), far below the guarantee, so a relaxed reference stays
// orders of magnitude under estimator TV scale).
inline double epsilon_for_grid_budget(const IndependentGaussianBelief& b,
                                      double requested, double cost_budget) {
  const auto cells = [&](double eps) {
    const double et = -gauss::quantile(std::min(2.0 * eps, 0.5));
    const double range = b.mu_max() - b.mu_min() + 2.0 * et * b.sigma_max();
    return std::ceil(range / (eps * 2.0 * gauss::sqrt_2pi * b.sigma_min())) + 2.0;
  };
  const double nmax =
      std::max(cost_budget / static_cast<double>(b.size()), 16.0);
  double eps = std::min(requested, 0.25);
  if (cells(eps) <= nmax) return eps;
  for (int it = 0; it < 8; ++it) {
    const double et = -gauss::quantile(std::min(2.0 * eps, 0.5));
    const double range = b.mu_max() - b.mu_min() + 2.0 * et * b.sigma_max();
    eps = range / ((nmax - 2.0) * 2.0 * gauss::sqrt_2pi * b.sigma_min());
    eps = std::min(std::max(eps, requested), 0.25);
  }
  return std::min(std::max(eps, requested), 0.25);
}

namespace detail {

inline void parallel_cells(std::size_t count, unsigned threads,
                           const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_workers = std::min<unsigned>(threads, static_cast<unsigned>(count));
  pool.reserve(n_workers);
  for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace detail

struct FidelityConfig {
  std::vector<std::size_t> sizes{100, 1000, 10000};
  std::size_t seeds = 20;
  double alpha = 200.0;  // per-estimator eps = 1/(alpha |X|)
  std::string family = "main";
  std::vector<Method> estimators{Method::flite, Method::alite, Method::fvapor,
                                 Method::est};
  double grid_cost_budget = 6.0e8;
  unsigned threads = 1;
  std::uint64_t master_seed = 20240001;
};

// One record per (size, seed, estimator): PoM, TV to the estimate_independence
// ground truth, entropies and wall time. Estimator failures land in the error
// column instead of aborting the suite.
inline std::vector<BenchRecord> run_fidelity_suite(const FidelityConfig& cfg) {
  const std::size_t cells = cfg.sizes.size() * cfg.seeds;
  std::vector<std::vector<BenchRecord>> per_cell(cells);
  const SeededRng master(cfg.master_seed);

  detail::parallel_cells(cells, cfg.threads, [&](std::size_t cell) {
    const std::size_t size_idx = cell / cfg.seeds;
    const std::size_t seed_idx = cell % cfg.seeds;
    const std::size_t n = cfg.sizes[size_idx];
    SeededRng rng = master.derive(n, seed_idx);
    const std::string instance =
        cfg.family + "-" + std::to_string(n) + "-s" + std::to_string(seed_idx);
    std::optional<IndependentGaussianBelief> belief_opt;
    std::optional<PomEstimate> gt_opt;
    std::string cell_error;
    const double eps_req = 1.0 / (cfg.alpha * static_cast<double>(n));
    ConvergenceConfig gt_cfg;
    try {
      belief_opt = synthetic_belief(n, rng, cfg.family);
      gt_cfg = ConvergenceConfig::with_epsilon(
          epsilon_for_grid_budget(*belief_opt, std::min(eps_req, 0.25),
                                  cfg.grid_cost_budget));
      gt_cfg.grid_point_cap = std::size_t(1) << 28;
      gt_opt = estimate_independence(*belief_opt, gt_cfg);
    } catch (const std::exception& err) {
      cell_error = err.what();
    }

    for (Method m : cfg.estimators) {
      if (!cell_error.empty()) {
        BenchRecord rec;
        rec.estimator = to_string(m);
        rec.instance_id = instance;
        rec.seed = seed_idx;
        rec.domain_size = n;
        rec.error = cell_error;
        per_cell[cell].push_back(std::move(rec));
        continue;
      }
      const IndependentGaussianBelief& belief = *belief_opt;
      const PomEstimate& gt = *gt_opt;
      const double h_true = shannon_entropy(gt.probs);
      BenchRecord rec;
      rec.estimator = to_string(m);
      rec.instance_id = instance;
      rec.seed = seed_idx;
      rec.domain_size = n;
      try {
        ConvergenceConfig ec = ConvergenceConfig::with_epsilon(eps_req);
        if (m == Method::est || m == Method::indep) {
          // grid-backed methods share the reference grid budget
          ec.epsilon = epsilon_for_grid_budget(belief, std::min(eps_req, 0.25),
                                               cfg.grid_cost_budget);
          ec.grid_point_cap = std::size_t(1) << 28;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const PomEstimate e = estimate(m, belief, ec);
        rec.wall_time_s = detail::seconds_since(t0);
        rec.tv = tv_distance(e.probs, gt.probs);
        rec.entropy_est = shannon_entropy(e.probs);
        rec.entropy_true = h_true;
      } catch (const PomError& err) {
        rec.error = err.what();
      }
      per_cell[cell].push_back(std::move(rec));
    }
  });

  std::vector<BenchRecord> out;
  for (auto& v : per_cell)
    for (auto& r : v) out.push_back(std::move(r));
  return out;
}

struct RecallConfig {
  std::size_t domain = 400;
  std::size_t instances = 10;
  double alpha = 200.0;
  std::string family = "main";
  std::vector<Method> estimators{Method::flite, Method::alite, Method::fvapor,
                                 Method::est};
  double grid_cost_budget = 6.0e8;
  std::size_t ts_draw_cap_mult = 50;  // cap 50*k draws, then fill by MEANS
  std::uint64_t master_seed = 20240002;
};

struct RecallSuiteResult {
  // one curve per (instance, method); methods: "truth", estimator tags,
  // "ts", "means"
  std::vector<std::pair<std::string, RecallCurve>> curves;  // instance_id, curve
  std::map<std::string, double> mean_auc;
};

namespace detail {

inline RecallCurve curve_from_order(const std::string& tag,
                                    const std::vector<std::size_t>& order,
                                    const std::vector<double>& gt) {
  RecallCurve c;
  c.estimator = tag;
  c.k_values.resize(order.size());
  c.recalls.resize(order.size());
  double run = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    run += gt[order[k]];
    c.k_values[k] = k + 1;
    c.recalls[k] = std::min(run, 1.0);
  }
  return c;
}

}  // namespace detail

inline RecallSuiteResult run_recall_suite(const RecallConfig& cfg) {
  RecallSuiteResult res;
  std::map<std::string, double> auc_sum;
  const SeededRng master(cfg.master_seed);

  for (std::size_t inst = 0; inst < cfg.instances; ++inst) {
    SeededRng rng = master.derive(cfg.domain, inst);
    const IndependentGaussianBelief belief =
        synthetic_belief(cfg.domain, rng, cfg.family);
    const std::string instance = "recall-" + std::to_string(inst);
    const std::size_t n = belief.size();
    const double eps_req = 1.0 / (cfg.alpha * static_cast<double>(n));

    ConvergenceConfig gt_cfg = ConvergenceConfig::with_epsilon(
        epsilon_for_grid_budget(belief, std::min(eps_req, 0.25),
                                cfg.grid_cost_budget));
    gt_cfg.grid_point_cap = std::size_t(1) << 28;
    const std::vector<double> gt = estimate_independence(belief, gt_cfg).probs;

    auto add_curve = [&](const std::string& tag,
                         const std::vector<std::size_t>& order) {
      RecallCurve c = detail::curve_from_order(tag, order, gt);
      auc_sum[tag] += c.auc();
      res.curves.emplace_back(instance, std::move(c));
    };

    add_curve("truth", top_k(gt, n));
    for (Method m : cfg.estimators) {
      ConvergenceConfig ec = ConvergenceConfig::with_epsilon(eps_req);
      if (m == Method::est || m == Method::indep) {
        ec.epsilon = *gt_cfg.epsilon;
        ec.grid_point_cap = gt_cfg.grid_point_cap;
      }
      add_curve(to_string(m), top_k(estimate(m, belief, ec).probs, n));
    }

    // MEANS: the k largest posterior means
    const std::vector<std::size_t> means_order = top_k(belief.mu(), n);
    add_curve("means", means_order);

    // TS: argmax draws in first-appearance order; arm j enters once found,
    // provided discovery happened within the 50*k draw budget for the k being
    // built, otherwise the slot is filled from the MEANS order. Built
    // incrementally so selections are nested and recalls nondecreasing.
    std::vector<std::size_t> discovery_at;  // draw index of each new distinct arm
    std::vector<std::size_t> ts_first;      // arms in first-appearance order
    {
      std::vector<char> seen(n, 0);
      const std::size_t max_draws = cfg.ts_draw_cap_mult * n;
      for (std::size_t t = 1; t <= max_draws && ts_first.size() < n; ++t) {
        std::size_t best = 0;
        double bv = -std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < n; ++x) {
          const double f = belief.mu()[x] + belief.sigma()[x] * rng.normal();
          if (f > bv) {
            bv = f;
            best = x;
          }
        }
        if (!seen[best]) {
          seen[best] = 1;
          ts_first.push_back(best);
          discovery_at.push_back(t);
        }
      }
    }
    std::vector<std::size_t> ts_order;
    {
      std::vector<char> used(n, 0);
      std::size_t ts_ptr = 0, means_ptr = 0;
      for (std::size_t k = 1; k <= n; ++k) {
        while (ts_ptr < ts_first.size() && used[ts_first[ts_ptr]]) ++ts_ptr;
        if (ts_ptr < ts_first.size() &&
            discovery_at[ts_ptr] <= cfg.ts_draw_cap_mult * k) {
          ts_order.push_back(ts_first[ts_ptr]);
          used[ts_first[ts_ptr]] = 1;
          continue;
        }
        while (means_ptr < n && used[means_order[means_ptr]]) ++means_ptr;
        ts_order.push_back(means_order[means_ptr]);
        used[means_order[means_ptr]] = 1;
      }
    }
    add_curve("ts", ts_order);
  }

  for (auto& [tag, s] : auc_sum)
    res.mean_auc[tag] = s / static_cast<double>(cfg.instances);
  return res;
}

struct RuntimeSweepConfig {
  std::vector<std::size_t> sizes{10000, 100000, 1000000};
  std::vector<Method> estimators{Method::flite, Method::fvapor, Method::alite,
                                 Method::est,   Method::indep,  Method::tsmc};
  double alpha = 1.0;
  std::size_t repetitions = 3;
  double budget_s = 60.0;
  double flops_per_s = 2.0e9;       // conservative projection rate
  double mem_budget_bytes = 3.0e9;  // dense covariance feasibility
  std::string family = "main";
  bool compute_tv = true;           // only when the reference grid fits
  double grid_cost_budget = 6.0e8;
  std::uint64_t master_seed = 20240003;
};

namespace detail {

// Projected wall time; used to mark rows "timeout" without running when the
// cost model already exceeds the budget (mirrors the paper-style budget cap).
inline double projected_seconds(Method m, std::size_t n, double eps, double delta,
                                const IndependentGaussianBelief& b,
                                double flops_per_s) {
  const double nd = static_cast<double>(n);
  switch (m) {
    case Method::tsmc: {
      const double samples =
          std::ceil(std::log(2.0 / delta) / (2.0 * eps * eps));
      return (nd * nd * nd / 3.0 + 2.0 * samples * nd * nd) / flops_per_s;
    }
    case Method::est:
    case Method::indep: {
      const double et = -gauss::quantile(std::min(2.0 * eps, 0.5));
      const double range = b.mu_max() - b.mu_min() + 2.0 * et * b.sigma_max();
      const double cells =
          std::ceil(range / (eps * 2.0 * gauss::sqrt_2pi * b.sigma_min())) + 2.0;
      const double passes = m == Method::indep ? 2.0 : 1.0;
      return passes * cells * nd * 4.0 / flops_per_s;
    }
    default:
      return 0.0;  // the threshold estimators are always fast
  }
}

}  // namespace detail

inline std::vector<BenchRecord> run_runtime_sweep(const RuntimeSweepConfig& cfg) {
  std::vector<BenchRecord> out;
  const SeededRng master(cfg.master_seed);
  for (std::size_t n : cfg.sizes) {
    for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
      SeededRng rng = master.derive(n, rep);
      const IndependentGaussianBelief belief =
          synthetic_belief(n, rng, cfg.family);
      const double eps = 1.0 / (cfg.alpha * static_cast<double>(n));
      const std::string instance =
          "runtime-" + std::to_string(n) + "-r" + std::to_string(rep);

      // reference for the tv column, only when the natural grid is affordable
      std::vector<double> gt;
      if (cfg.compute_tv &&
          detail::projected_seconds(Method::indep, n, std::min(eps, 0.25), 0.05,
                                    belief, cfg.flops_per_s) <= cfg.budget_s &&
          eps <= 0.25) {
        ConvergenceConfig gc = ConvergenceConfig::with_epsilon(eps);
        gc.grid_point_cap = std::size_t(1) << 28;
        gt = estimate_independence(belief, gc).probs;
      }

      for (Method m : cfg.estimators) {
        BenchRecord rec;
        rec.estimator = to_string(m);
        rec.instance_id = instance;
        rec.seed = rep;
        rec.domain_size = n;
        const double projected = detail::projected_seconds(
            m, n, eps, 0.05, belief, cfg.flops_per_s);
        const double mem =
            m == Method::tsmc ? 2.0 * 8.0 * static_cast<double>(n) *
                                    static_cast<double>(n)
                              : 0.0;
        if (projected > cfg.budget_s || mem > cfg.mem_budget_bytes) {
          rec.error = "timeout";
          out.push_back(std::move(rec));
          continue;
        }
        try {
          ConvergenceConfig ec = ConvergenceConfig::with_epsilon(eps);
          ec.grid_point_cap = std::size_t(1) << 28;
          const auto t0 = std::chrono::steady_clock::now();
          PomEstimate e;
          if (m == Method::tsmc) {
            // dense diagonal covariance; feasibility was checked above
            std::vector<double> cov(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
              cov[i * n + i] = belief.sigma()[i] * belief.sigma()[i];
            FullGaussianBelief fb(belief.mu(), std::move(cov));
            SeededRng mc_rng = rng.derive(7, rep);
            e = estimate_tsmc(fb, ec, mc_rng);
          } else {
            e = estimate(m, belief, ec);
          }
          rec.wall_time_s = detail::seconds_since(t0);
          if (!gt.empty()) rec.tv = tv_distance(e.probs, gt);
          rec.entropy_est = shannon_entropy(e.probs);
        } catch (const PomError& err) {
          rec.error = err.what();
        }
        out.push_back(std::move(rec));
      }
    }
  }
  return out;
}

}  // namespace pom::bench
