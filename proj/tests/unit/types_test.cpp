#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pom/types.hpp"

using namespace pom;

TEST_CASE("validate_belief happy path and aggregates", "[types]") {
  const auto b = validate_belief({0.0, 1.0}, {1.0, 1.0});
  CHECK(b.size() == 2);
  CHECK(b.mu_max() == 1.0);
  CHECK(b.mu_min() == 0.0);
  CHECK(b.sigma_min() == 1.0);
  CHECK(b.sigma_max() == 1.0);
}

TEST_CASE("validate_belief typed errors", "[types]") {
  try {
    validate_belief({0.0}, {1.0});
    FAIL("expected DomainTooSmall");
  } catch (const PomError& e) {
    CHECK(e.code() == PomErrc::domain_too_small);
  }
  try {
    validate_belief({0.0, 1.0}, {1.0, -1.0});
    FAIL("expected NonPositiveSigma");
  } catch (const PomError& e) {
    CHECK(e.code() == PomErrc::non_positive_sigma);
    REQUIRE(e.index().has_value());
    CHECK(*e.index() == 1);
  }
  try {
    validate_belief({0.0, 1.0, 2.0}, {1.0, 1.0});
    FAIL("expected LengthMismatch");
  } catch (const PomError& e) {
    CHECK(e.code() == PomErrc::length_mismatch);
  }
  try {
    validate_belief({0.0, std::nan("")}, {1.0, 1.0});
    FAIL("expected NonFinite");
  } catch (const PomError& e) {
    CHECK(e.code() == PomErrc::non_finite);
    CHECK(*e.index() == 1);
  }
}

TEST_CASE("construction is total over junk inputs", "[types]") {
  std::mt19937_64 gen(3);
  const double specials[] = {0.0,
                             -1.0,
                             std::numeric_limits<double>::infinity(),
                             -std::numeric_limits<double>::infinity(),
                             std::nan(""),
                             1e308,
                             5e-324};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t nm = gen() % 4;
    const std::size_t ns = gen() % 4;
    std::vector<double> mu(nm), sigma(ns);
    for (auto& v : mu) v = specials[gen() % 7];
    for (auto& v : sigma) v = specials[gen() % 7];
    try {
      const auto b = validate_belief(mu, sigma);
      CHECK(b.size() >= 2);  // success implies a valid object
    } catch (const PomError&) {
      // typed failure is the other allowed outcome
    }
  }
}

TEST_CASE("full belief validation and diagonal projection", "[types]") {
  FullGaussianBelief fb({0.0, 1.0}, {4.0, 0.5, 0.5, 1.0});
  const auto diag = fb.diagonal_belief();
  CHECK(diag.sigma()[0] == 2.0);
  CHECK(diag.sigma()[1] == 1.0);

  try {
    FullGaussianBelief bad({0.0, 1.0}, {4.0, 0.5, 0.2, 1.0});
    FAIL("expected NotSymmetric");
  } catch (const PomError& e) {
    CHECK(e.code() == PomErrc::not_symmetric);
  }
  try {
    FullGaussianBelief bad({0.0, 1.0}, {-1.0, 0.0, 0.0, 1.0});
    FAIL("expected NotPSD");
  } catch (const PomError& e) {
    CHECK(e.code() == PomErrc::not_psd);
  }
  // zero diagonal is allowed for the full belief but blocks the projection
  FullGaussianBelief zero_diag({0.0, 1.0}, {0.0, 0.0, 0.0, 1.0});
  CHECK_THROWS_AS(zero_diag.diagonal_belief(), PomError);
}

TEST_CASE("convergence config resolves exactly one accuracy knob", "[types]") {
  CHECK(ConvergenceConfig::with_epsilon(1e-3).resolve_epsilon(100) == 1e-3);
  CHECK(ConvergenceConfig::with_alpha(200.0).resolve_epsilon(100) ==
        Catch::Approx(1.0 / 20000.0));
  ConvergenceConfig both;
  both.epsilon = 1e-3;
  both.alpha = 1.0;
  CHECK_THROWS_AS(both.resolve_epsilon(10), PomError);
  ConvergenceConfig none;
  CHECK_THROWS_AS(none.resolve_epsilon(10), PomError);
}

TEST_CASE("seeded rng streams are reproducible and derivable", "[types]") {
  SeededRng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  SeededRng c(42), d(43);
  CHECK(c.normal() != d.normal());

  // derive is pure: it does not disturb or depend on the parent's stream
  SeededRng parent(7);
  SeededRng d1 = parent.derive(1, 2);
  (void)parent.normal();
  SeededRng d2 = parent.derive(1, 2);
  CHECK(d1.next_u64() == d2.next_u64());

  SeededRng u(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform01();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}
