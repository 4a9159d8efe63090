#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pom/bench.hpp"
#include "pom/estimators.hpp"

using namespace pom;

namespace {

std::vector<double> dirichlet_uniform(std::size_t n, SeededRng& rng) {
  // normalized exponentials = Dirichlet(1, ..., 1)
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& v : p) {
    v = -std::log(rng.uniform01());
    s += v;
  }
  for (auto& v : p) v /= s;
  return p;
}

}  // namespace

TEST_CASE("quasi-surprisal values and asymptotics", "[objectives]") {
  CHECK(quasi_surprisal(1.0) == 0.0);
  CHECK(quasi_surprisal(0.5) == Catch::Approx(0.3183098861837907).epsilon(1e-12));
  // I~(u)/(-ln u) climbs monotonically toward 1
  double prev = 0.0;
  for (double u : {1e-3, 1e-6, 1e-12}) {
    const double ratio = quasi_surprisal(u) / (-std::log(u));
    CHECK(ratio > prev);
    CHECK(ratio < 1.0);
    prev = ratio;
  }
  CHECK(prev > 0.9);
  CHECK_THROWS_AS(quasi_surprisal(0.0), PomError);
  CHECK_THROWS_AS(quasi_surprisal(1.5), PomError);
}

TEST_CASE("objective W degenerate point mass", "[objectives]") {
  const IndependentGaussianBelief b({0.3, 1.7}, {1.0, 2.0});
  CHECK(objective_w(b, {0.0, 1.0}) == Catch::Approx(1.7).margin(1e-12));
  CHECK(objective_w(b, {1.0, 0.0}) == Catch::Approx(0.3).margin(1e-12));
}

TEST_CASE("objective W shrinks toward the mean term as sigma -> 0", "[objectives]") {
  const std::vector<double> p{0.25, 0.75};
  double prev = std::numeric_limits<double>::infinity();
  for (double s : {1.0, 1e-2, 1e-4}) {
    const IndependentGaussianBelief b({0.3, 1.7}, {s, s});
    const double w = objective_w(b, p);
    CHECK(w < prev);
    prev = w;
  }
  CHECK(prev == Catch::Approx(0.25 * 0.3 + 0.75 * 1.7).margin(1e-3));
}

TEST_CASE("objective V matches the closed form for uniform identical arms",
          "[objectives]") {
  const std::size_t n = 16;
  const IndependentGaussianBelief b(std::vector<double>(n, 0.4),
                                    std::vector<double>(n, 1.3));
  const std::vector<double> uniform(n, 1.0 / n);
  CHECK(objective_v(b, uniform) ==
        Catch::Approx(0.4 + std::sqrt(2.0 * std::log(double(n))) * 1.3)
            .epsilon(1e-12));
}

TEST_CASE("V dominates W pointwise", "[objectives]") {
  // I~(u) <= -ln u on (0,1), verified numerically on a grid before relying on it
  for (double u = 1e-6; u < 1.0; u *= 1.9) {
    CHECK(quasi_surprisal(u) <= -std::log(u) + 1e-12);
  }
  SeededRng rng(61);
  const auto b = bench::synthetic_belief(12, rng, "main");
  for (int i = 0; i < 200; ++i) {
    const auto p = dirichlet_uniform(12, rng);
    CHECK(objective_v(b, p) >= objective_w(b, p) - 1e-12);
  }
}

TEST_CASE("variational optimality of the estimator outputs", "[objectives]") {
  SeededRng rng(67);
  const auto b = bench::synthetic_belief(8, rng, "main");
  const auto cfg = ConvergenceConfig::with_epsilon(1e-12);
  const auto flite = estimate_flite(b, cfg);
  const auto fvapor = estimate_fvapor(b, cfg);
  const double w_star = objective_w(b, flite.probs);
  const double v_star = objective_v(b, fvapor.probs);
  for (int i = 0; i < 2000; ++i) {
    const auto p = dirichlet_uniform(8, rng);
    CHECK(w_star >= objective_w(b, p) - 1e-9);
    CHECK(v_star >= objective_v(b, p) - 1e-9);
  }
}

TEST_CASE("objectives reject off-simplex inputs", "[objectives]") {
  const IndependentGaussianBelief b({0.0, 1.0}, {1.0, 1.0});
  CHECK_THROWS_AS(objective_w(b, {0.6, 0.6}), PomError);
  CHECK_THROWS_AS(objective_v(b, {1.2, -0.2}), PomError);
  CHECK_THROWS_AS(objective_w(b, {0.5, 0.25, 0.25}), PomError);
}
