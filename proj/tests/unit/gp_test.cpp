#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "pom/gp.hpp"

using namespace pom;

TEST_CASE("gp prior: no observations returns mean zero and the kernel matrix",
          "[gp]") {
  const auto m =
      make_gp_1d(KernelType::squared_exponential, 0.2, 1.5, 0.1, 12, 0.0, 1.0);
  const auto prior = gp_posterior(m, {});
  CHECK(prior.size() == 12);
  for (double v : prior.mu()) CHECK(v == 0.0);
  CHECK(prior.cov_at(3, 3) == Catch::Approx(1.5 * 1.5).epsilon(1e-6));
  CHECK(prior.cov_at(0, 11) == Catch::Approx(kernel_value(m, 0, 11)).margin(1e-12));
}

TEST_CASE("gp posterior interpolates a noiseless observation", "[gp]") {
  const auto m =
      make_gp_1d(KernelType::squared_exponential, 0.3, 1.0, 0.0, 21, 0.0, 1.0);
  GpData data;
  data.idx = {10};
  data.y = {0.7};
  const auto post = gp_posterior(m, data);
  CHECK(post.mu()[10] == Catch::Approx(0.7).margin(1e-4));
  CHECK(post.cov_at(10, 10) == Catch::Approx(0.0).margin(1e-4));
}

TEST_CASE("gp posterior variance never exceeds the prior variance", "[gp]") {
  for (auto kt : {KernelType::squared_exponential, KernelType::exponential,
                  KernelType::matern52}) {
    const auto m = make_gp_1d(kt, 0.15, 1.0, 0.2, 40, 0.0, 1.0);
    const auto prior = gp_posterior(m, {});
    SeededRng rng(83);
    GpData data;
    for (int i = 0; i < 8; ++i) {
      data.idx.push_back(rng.next_u64() % 40);
      data.y.push_back(rng.normal());
    }
    const auto post = gp_posterior(m, data);
    for (std::size_t x = 0; x < 40; ++x)
      CHECK(post.cov_at(x, x) <= prior.cov_at(x, x) + 1e-9);
  }
}

TEST_CASE("gp posterior covariance stays symmetric PSD across observation sets",
          "[gp]") {
  const auto m =
      make_gp_2d(KernelType::matern52, 0.4, 0.8, 0.1, 6, -1.0, 1.0);  // 36 pts
  SeededRng rng(89);
  for (int trial = 0; trial < 100; ++trial) {
    GpData data;
    const std::size_t k = 1 + rng.next_u64() % 10;
    for (std::size_t i = 0; i < k; ++i) {
      data.idx.push_back(rng.next_u64() % 36);
      data.y.push_back(rng.normal());
    }
    const auto post = gp_posterior(m, data);  // construction checks symmetry
    Eigen::Map<const Eigen::MatrixXd> cov(post.cov().data(), 36, 36);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  }
}

TEST_CASE("gp prior samples are reproducible", "[gp]") {
  const auto m =
      make_gp_1d(KernelType::exponential, 0.1, 1.0, 0.0, 30, 0.0, 1.0);
  SeededRng r1(99), r2(99);
  const auto f1 = gp_prior_sample(m, r1);
  const auto f2 = gp_prior_sample(m, r2);
  CHECK(f1 == f2);
  double spread = 0.0;
  for (double v : f1) spread = std::max(spread, std::abs(v));
  CHECK(spread > 0.1);  // a genuine draw, not the zero function
}

TEST_CASE("gp model validation", "[gp]") {
  GpModel bad;
  bad.length_scale = -1.0;
  bad.points = {0.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), PomError);
  const auto m =
      make_gp_1d(KernelType::squared_exponential, 0.2, 1.0, 0.0, 5, 0.0, 1.0);
  GpData off_grid;
  off_grid.idx = {9};
  off_grid.y = {0.0};
  CHECK_THROWS_AS(gp_posterior(m, off_grid), PomError);
}
