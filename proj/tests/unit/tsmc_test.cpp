#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pom/estimators.hpp"

using namespace pom;

TEST_CASE("tsmc sample count follows Hoeffding", "[tsmc]") {
  // ceil(ln(2/delta) / (2 eps^2))
  CHECK(tsmc_sample_count(0.02, 0.05) == 4612);
  CHECK(tsmc_sample_count(0.1, 0.1) == 150);
}

TEST_CASE("tsmc separated arms give a deterministic histogram", "[tsmc]") {
  const FullGaussianBelief b({10.0, 0.0}, {1e-4, 0.0, 0.0, 1e-4});
  SeededRng rng(123);
  const auto e = estimate_tsmc(b, ConvergenceConfig::with_epsilon(0.05), rng);
  CHECK(e.probs[0] == 1.0);
  CHECK(e.probs[1] == 0.0);
  CHECK(e.mc_epsilon.has_value());
  CHECK(*e.mc_delta == 0.05);
}

TEST_CASE("tsmc fixed seed reproduces bit-identical output", "[tsmc]") {
  const FullGaussianBelief b({0.0, 0.2, 0.1}, {1.0, 0.3, 0.0, 0.3, 1.0, 0.2,
                                               0.0, 0.2, 1.0});
  SeededRng r1(777), r2(777);
  const auto e1 = estimate_tsmc_fixed(b, 5000, r1);
  const auto e2 = estimate_tsmc_fixed(b, 5000, r2);
  for (std::size_t i = 0; i < 3; ++i) CHECK(e1.probs[i] == e2.probs[i]);
}

TEST_CASE("tsmc uniform identity covariance is near uniform", "[tsmc]") {
  const std::size_t n = 10;
  std::vector<double> cov(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) cov[i * n + i] = 1.0;
  const FullGaussianBelief b(std::vector<double>(n, 2.0), std::move(cov));
  SeededRng rng(2024);
  const auto e = estimate_tsmc(b, ConvergenceConfig::with_epsilon(0.01), rng);
  CHECK(e.iterations == tsmc_sample_count(0.01, 0.05));
  for (double p : e.probs) CHECK(p == Catch::Approx(0.1).margin(0.01));
}

TEST_CASE("tsmc respects correlation structure", "[tsmc]") {
  // strongly correlated pair with a slightly higher third arm:
  // the independent projection would overweight the pair
  const double r = 0.99;
  const FullGaussianBelief b({0.0, 0.0, 0.1},
                             {1.0, r, 0.0, r, 1.0, 0.0, 0.0, 0.0, 1.0});
  SeededRng rng(5150);
  const auto e = estimate_tsmc_fixed(b, 200000, rng);
  // arms 0 and 1 act nearly as one: arm 2 collects more than 1/3
  CHECK(e.probs[2] > 0.40);
  CHECK(e.probs[0] == Catch::Approx(e.probs[1]).margin(0.01));
}

TEST_CASE("tsmc typed failures", "[tsmc]") {
  // eigenvalue well below the PSD tolerance
  const FullGaussianBelief b({0.0, 0.0}, {1.0, 2.0, 2.0, 1.0});
  SeededRng rng(1);
  try {
    (void)estimate_tsmc_fixed(b, 100, rng);
    FAIL("expected NotPSD");
  } catch (const PomError& e) {
    CHECK(e.code() == PomErrc::not_psd);
  }

  ConvergenceConfig cfg = ConvergenceConfig::with_epsilon(1e-6);
  cfg.mc_sample_cap = 1000;  // needs ~1.8e12 samples
  const FullGaussianBelief ok({0.0, 0.0}, {1.0, 0.0, 0.0, 1.0});
  try {
    (void)estimate_tsmc(ok, cfg, rng);
    FAIL("expected SampleBudgetOverflow");
  } catch (const PomError& e) {
    CHECK(e.code() == PomErrc::sample_budget_overflow);
  }
}

TEST_CASE("tsmc zero covariance degenerates to the argmax of mu", "[tsmc]") {
  const FullGaussianBelief b({0.0, 1.0, 0.5}, std::vector<double>(9, 0.0));
  SeededRng rng(9);
  const auto e = estimate_tsmc_fixed(b, 64, rng);
  CHECK(e.probs[1] == 1.0);
}
