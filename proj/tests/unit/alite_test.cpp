#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pom/bench.hpp"
#include "pom/estimators.hpp"

using namespace pom;

TEST_CASE("alite stage-1 window collapses for two standard arms", "[alite]") {
  // Phi(0)^2 = 1/4, so the 0.25-quantile of g is exactly 0 and the window
  // [mu_min + sigma_min Phi^{-1}(0.5), mu_max + sigma_max Phi^{-1}(0.5)] = [0,0]
  const IndependentGaussianBelief b({0.0, 0.0}, {1.0, 1.0});
  const auto q = detail_alite::stage1_search(b, 4);
  CHECK(q.q1_low == 0.0);
  CHECK(q.q1_up == 0.0);
}

TEST_CASE("alite identical arms are uniform", "[alite]") {
  const std::size_t n = 11;
  const IndependentGaussianBelief b(std::vector<double>(n, 0.5),
                                    std::vector<double>(n, 2.0));
  const auto e = estimate_alite(b, ConvergenceConfig::with_epsilon(1e-5));
  for (double p : e.probs) CHECK(p == Catch::Approx(1.0 / n).margin(1e-5));
}

TEST_CASE("alite tracks the independence estimator on the two-arm example",
          "[alite]") {
  const IndependentGaussianBelief b({0.0, 1.0}, {1.0, 1.0});
  const auto cfg = ConvergenceConfig::with_epsilon(1e-4);
  const auto ea = estimate_alite(b, cfg);
  const auto ei = estimate_independence(b, cfg);
  CHECK(tv_distance(ea.probs, ei.probs) <= 0.02);
}

TEST_CASE("alite interval contract on random beliefs", "[alite]") {
  SeededRng rng(47);
  const double eps = 1e-4;
  for (int trial = 0; trial < 10; ++trial) {
    const auto b = bench::synthetic_belief(32, rng, "main");
    const auto e = estimate_alite(b, ConvergenceConfig::with_epsilon(eps));
    REQUIRE(e.lower.size() == b.size());
    REQUIRE(e.upper.size() == b.size());
    double max_gap = 0.0;
    for (std::size_t x = 0; x < b.size(); ++x) {
      CHECK(e.lower[x] <= e.upper[x]);
      CHECK(e.raw[x] >= e.lower[x] - 1e-15);
      CHECK(e.raw[x] <= e.upper[x] + 1e-15);
      max_gap = std::max(max_gap, e.upper[x] - e.lower[x]);
    }
    CHECK(max_gap < eps);
    double s = 0.0;
    for (double p : e.probs) s += p;
    CHECK(s == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("alite translation equivariance", "[alite]") {
  SeededRng rng(53);
  const auto b = bench::synthetic_belief(16, rng, "main");
  const auto cfg = ConvergenceConfig::with_epsilon(1e-5);
  const auto e0 = estimate_alite(b, cfg);
  std::vector<double> mu_shift(b.mu());
  for (auto& m : mu_shift) m += 1.75;
  const auto e1 = estimate_alite(IndependentGaussianBelief(mu_shift, b.sigma()), cfg);
  for (std::size_t x = 0; x < b.size(); ++x)
    CHECK(e1.probs[x] == Catch::Approx(e0.probs[x]).margin(1e-4));
}

TEST_CASE("alite argmax sits at the largest mean under equal sigma", "[alite]") {
  const IndependentGaussianBelief b({0.2, 1.4, 0.9, -0.3}, {1.0, 1.0, 1.0, 1.0});
  const auto e = estimate_alite(b, ConvergenceConfig::with_epsilon(1e-5));
  std::size_t arg = 0;
  for (std::size_t x = 1; x < 4; ++x)
    if (e.probs[x] > e.probs[arg]) arg = x;
  CHECK(arg == 1);
}

TEST_CASE("alite depth cap raises MaxIterationsExceeded", "[alite]") {
  // an epsilon below floating-point resolution cannot converge
  const IndependentGaussianBelief b({0.0, 1.0}, {1.0, 1.0});
  CHECK_THROWS_AS(estimate_alite(b, ConvergenceConfig::with_epsilon(1e-18)),
                  PomError);
}
