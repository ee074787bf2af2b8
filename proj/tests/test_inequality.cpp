#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "frontburn/inequality.hpp"

using namespace frontburn;

namespace {

Profile sigmoid_profile(double lambda, double dx) {
  return sample_profile([=](double x) { return 1.0 / (1.0 + std::exp(lambda * x)); }, -40 / lambda,
                        40 / lambda, dx);
}

// The coupling estimate holds cell by cell: |a - b| <= 3 ((a - b)^2 + a(1-a) + b(1-b)).
double pointwise_gap(double a, double b) {
  return 3.0 * ((a - b) * (a - b) + a * (1 - a) + b * (1 - b)) - std::abs(a - b);
}

}  // namespace

TEST_CASE("extremal profile samples") {
  const auto p = extremal_profile(1e-3);
  const Index mid = (p.size() - 1) / 2;
  CHECK(p.x(mid) == doctest::Approx(0.0).scale(1.0));
  CHECK(p.values[mid] == 0.5);
  CHECK(extremal_value(-std::numbers::pi / 2) == 1.0);
  CHECK(extremal_value(std::numbers::pi / 2) == 0.0);
  CHECK(p.x_lo <= -std::numbers::pi);
  CHECK(p.x_hi() >= std::numbers::pi);
  CHECK(p.admissible());
  CHECK_THROWS_AS(extremal_profile(1.0), std::invalid_argument);
}

TEST_CASE("extremal profile attains (pi/8)^2") {
  const auto terms = fineq_product(extremal_profile(1e-3));
  CHECK(terms.dirichlet == doctest::Approx(std::numbers::pi / 8).epsilon(1e-5));
  CHECK(terms.reaction == doctest::Approx(std::numbers::pi / 8).epsilon(1e-5));
  CHECK(std::abs(terms.product - kFineqConstant) <= 1e-5);
}

TEST_CASE("sigmoid terms and dilation invariance") {
  for (double lambda : {0.25, 1.0, 4.0}) {
    const auto terms = fineq_product(sigmoid_profile(lambda, 1e-3));
    CHECK(terms.dirichlet == doctest::Approx(lambda / 6).epsilon(1e-4));
    CHECK(terms.reaction == doctest::Approx(1 / lambda).epsilon(1e-4));
    CHECK(std::abs(terms.product - 1.0 / 6) <= 1e-3 / 6);
  }
  for (std::uint64_t seed : {3u, 17u, 99u}) {
    const auto base = random_admissible_profile(seed, 1e-3);
    const double reference = fineq_product(base).product;
    for (double lambda : {0.25, 4.0}) {
      const auto dilated = sample_profile([&](double x) { return base.value_at(lambda * x); },
                                          base.x_lo / lambda, base.x_hi() / lambda, 1e-3 / lambda * 0.5);
      CHECK(std::abs(fineq_product(dilated).product - reference) <= 1e-3 * reference);
    }
  }
}

TEST_CASE("Cauchy-Schwarz chain") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto p = random_admissible_profile(seed, 1e-3);
    const auto terms = fineq_product(p);
    const double cs = fineq_cauchy_schwarz_term(p);
    CHECK(terms.product >= cs * cs * (1 - 1e-12));
    // An exact derivative: int T_x sqrt(T(1-T)) dx = -int_0^1 sqrt(u(1-u)) du.
    CHECK(-cs == doctest::Approx(std::numbers::pi / 8).epsilon(1e-3));
  }
}

TEST_CASE("random profiles are deterministic and admissible") {
  const auto a = random_admissible_profile(42, 1e-3);
  const auto b = random_admissible_profile(42, 1e-3);
  CHECK(a.x_lo == b.x_lo);
  CHECK((a.values == b.values).all());
  CHECK_FALSE((random_admissible_profile(43, 1e-3).values.size() == a.values.size() &&
               (random_admissible_profile(43, 1e-3).values == a.values).all()));
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    CHECK(random_admissible_profile(seed, 1e-2).admissible());
  }
}

TEST_CASE("1000 random profiles stay above (pi/8)^2") {
  const auto result = run_fineq_selftest(1e-3, 1000);
  CHECK(result.extremal_ok());
  CHECK(result.random_ok());
  CHECK(result.worst_ratio >= 1 - kFineqQuadratureTolerance);
  CHECK(result.seeds == 1000);
}

TEST_CASE("coupling bound examples") {
  const auto p = random_admissible_profile(5, 1e-2);
  const auto same = l1_coupling_bound(p, p);
  CHECK(same.lhs == 0.0);
  CHECK(same.holds());
  CHECK(pointwise_gap(1.0, 0.0) == doctest::Approx(2.0));
  CHECK(std::abs(0.5 - 0.4) <= 3 * (0.01 + 0.25 + 0.24));
  CHECK(pointwise_gap(0.5, 0.4) == doctest::Approx(1.4));
  CHECK_THROWS_AS(l1_coupling_bound(p, random_admissible_profile(6, 1e-2)), GridMismatchError);
}

TEST_CASE("coupling bound holds cell by cell on a dense scan") {
  double worst = 1.0;
  for (int i = 0; i <= 400; ++i) {
    for (int k = 0; k <= 400; ++k) worst = std::min(worst, pointwise_gap(i / 400.0, k / 400.0));
  }
  CHECK(worst >= 0.0);
  CHECK(worst == doctest::Approx(0.0).scale(1.0));  // attained at a = b
}

TEST_CASE("coupling bound for 1000 random pairs") {
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    auto [p, q] = align(random_admissible_profile(seed, 1e-2), random_admissible_profile(seed + 5000, 1e-2));
    const auto bound = l1_coupling_bound(p, q);
    CHECK(bound.lhs > 0.0);
    CHECK(bound.holds());
  }
}

TEST_CASE("coupling bound near the one-third case boundary") {
  // Plateaus a and b with |a - b| close to 1/3, where the two proof cases meet.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> level(0.0, 2.0 / 3.0);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = level(rng);
    const double b = std::clamp(a + 1.0 / 3.0 + jitter(rng), 0.0, 1.0);
    auto plateau = [](double v) {
      return [v](double x) {
        return (v + (1 - v) / (1 + std::exp(4 * (x + 8)))) / (1 + std::exp(4 * (x - 8)));
      };
    };
    const auto p = sample_profile(plateau(a), -20, 20, 1e-2);
    const auto q = sample_profile(plateau(b), -20, 20, 1e-2);
    const auto bound = l1_coupling_bound(p, q);
    CHECK(bound.holds());
    CHECK(pointwise_gap(a, b) >= 0.0);
  }
  // The tightest plateaus sit at the ends of [0, 1].
  const auto bound = l1_coupling_bound(sample_profile([](double x) { return x < 0 ? 1.0 : 0.0; }, -1, 1, 1e-2),
                                       sample_profile([](double x) { return x < 0.5 ? 1.0 : 0.0; }, -1, 1, 1e-2));
  CHECK(bound.holds());
}

TEST_CASE("value_at extends by the limits") {
  const auto p = sigmoid_profile(1.0, 0.1);
  CHECK(p.value_at(p.x_lo - 1) == 1.0);
  CHECK(p.value_at(p.x_hi() + 1) == 0.0);
  CHECK(p.value_at(0.05) == doctest::Approx(0.5 * (p.value_at(0.0) + p.value_at(0.1))));
  const auto r = resample(p, -10, 0.05, 401);
  CHECK(r.value_at(0.0) == doctest::Approx(0.5).epsilon(1e-12));
}
