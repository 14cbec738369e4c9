#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "special_functions.hpp"

using namespace circlekit;

TEST_CASE("eta at named points") {
  CHECK(eta(1.0).eta == doctest::Approx(0.5671432904).epsilon(1e-10));
  CHECK(std::abs(eta(0.8 + std::log(5.0)).eta - 0.2) < 1e-10);
  CHECK(std::abs(eta(0.5 + std::log(2.0)).eta - 0.5) < 1e-10);
  CHECK(std::abs(eta(0.75 + std::log(4.0)).eta - 0.25) < 1e-10);
}

TEST_CASE("eta derivative identity and domain") {
  for (double t : {0.05, 0.7, 2.0, 9.0}) {
    auto p = eta(t);
    CHECK(p.eta_prime < 0);
    CHECK(std::abs(p.eta_prime + p.eta / (1 + p.eta)) < 1e-12);
  }
  CHECK_THROWS_AS(eta(0.0), DomainError);
  CHECK_THROWS_AS(eta(-1.0), DomainError);
}

TEST_CASE("eta is strictly decreasing and solves its equation on a grid") {
  double prev = 1.0;
  for (int i = 1; i <= 1000; ++i) {
    const double t = 0.01 + (10.0 - 0.01) * i / 1000.0;
    const double u = eta(t).eta;
    CHECK(std::abs(u + std::log(u) - (1.0 - t)) < 1e-10);
    CHECK(u < prev);
    prev = u;
  }
}

TEST_CASE("eta stays above 1/(4t-1) on [1,3]") {
  for (int i = 0; i < 1000; ++i) {
    const double t = 1.0 + 2.0 * i / 999.0;
    CHECK(eta(t).eta > 1.0 / (4 * t - 1));
  }
}

TEST_CASE("eta derivative matches central differences") {
  const double h = 1e-5;
  for (int i = 0; i <= 90; ++i) {
    const double t = 0.5 + 4.5 * i / 90.0;
    const double fd = (eta(t + h).eta - eta(t - h).eta) / (2 * h);
    CHECK(std::abs(eta(t).eta_prime - fd) < 1e-6);
  }
}

TEST_CASE("transcendental constants") {
  const double c5 = solve_transcendental_constant(ThetaMode(5));
  const double c4 = solve_transcendental_constant(ThetaMode(4));
  CHECK(std::abs(c5 - 2.134693) < 1e-6);
  CHECK(std::abs(c4 - 1.961969) < 1e-6);
  CHECK(std::abs(2 * c5 - 2 - std::log(5 * c5 - 1)) < 1e-10);
  CHECK(std::abs(2 * c4 - 2 - std::log(4 * c4 - 1)) < 1e-10);
  CHECK(std::abs(find_c_theta(ThetaMode(5)) - c5) < 1e-8);
  CHECK(std::abs(find_c_theta(ThetaMode(4)) - c4) < 1e-8);
  CHECK(std::abs(eta_level_constant(ThetaMode(5)) - 2.409437) < 1e-6);
  CHECK(std::abs(eta_level_constant(ThetaMode(4)) - 2.136294) < 1e-6);
}

TEST_CASE("theta mode accepts only 4 and 5") {
  CHECK_THROWS_AS(ThetaMode(3), DomainError);
  CHECK_THROWS_AS(ThetaMode(6), DomainError);
  CHECK(ThetaMode(4).value() == 4);
}

TEST_CASE("tau of sigma") {
  const ThetaMode five(5);
  const double c = solve_transcendental_constant(five);
  // full-precision plug-in of c; the commonly quoted 1.031445 is off in the fourth place
  CHECK(tau_of_sigma(c, five) == doctest::Approx(1.0313178305).epsilon(1e-9));
  const double tau2 = tau_of_sigma(2.0, five);
  CHECK(std::abs(eta(2.0 + tau2).eta - 1.0 / (5 * 2.0 - 1)) < 1e-9);
  // 1 + ln(21/4) < 5/2 + 4/21
  CHECK(1 + std::log(21.0 / 4) < 2.5 + 4.0 / 21);
  CHECK(tau_of_sigma(1.25, five) < 1.25);
  CHECK(tau_of_sigma(1.25, five) > 0);
  CHECK_THROWS_AS(tau_of_sigma(1.2, five), DomainError);
  CHECK_THROWS_AS(tau_of_sigma(3.1, five), DomainError);
}

TEST_CASE("tau prime closed form") {
  for (int th : {4, 5}) {
    const ThetaMode mode(th);
    for (int i = 0; i <= 60; ++i) {
      const double s = 1.5 + 1.5 * i / 60.0;
      const double h = 1e-6;
      const double lo = std::max(1.5, s - h), hi = std::min(3.0, s + h);
      const double fd = (tau_of_sigma(hi, mode) - tau_of_sigma(lo, mode)) / (hi - lo);
      CHECK(std::abs(tau_prime(s, mode) - fd) < 1e-6);
      CHECK(tau_prime(s, mode) < 0);
    }
  }
}

TEST_CASE("E closed form against direct minimisation") {
  const ThetaMode five(5), four(4);
  CHECK(big_e(1.5, five) > big_e(2.0, five));
  CHECK(big_e(2.0, five) > big_e(3.0, five));
  CHECK(big_e(3.0, five) < 1.0);
  CHECK(big_e(1.5, five) > 1.0);
  auto [tau_min, h_min] = minimize_h(2.5, four);
  CHECK(std::abs(h_min - big_e(2.5, four)) < 1e-6);
  CHECK(std::abs(tau_min - tau_of_sigma(2.5, four)) < 1e-4);
  CHECK_NOTHROW(big_e(2.2, five, true));
  CHECK_THROWS_AS(big_e(1.4, five), DomainError);
}

TEST_CASE("sigma even plan") {
  const ThetaMode five(5);
  auto p = sigma_even_plan(17, five);
  const double c = solve_transcendental_constant(five);
  CHECK(p.even_target == 54);
  CHECK(p.image_lo == doctest::Approx(53.82).epsilon(1e-3));
  CHECK(p.image_hi == doctest::Approx(55.96).epsilon(1e-3));
  CHECK(p.tau_drop < 2.0);
  CHECK(p.sigma > c);
  CHECK(p.sigma < c + 4.0 / 17);
  CHECK(std::abs(17 * (p.sigma + p.tau) - 54) < 1e-9);
  CHECK(p.tau > 0);
  CHECK(p.tau < p.sigma);
  CHECK_THROWS_AS(sigma_even_plan(16, five), DomainError);
  for (int k = 17; k <= 60; ++k)
    for (int th : {4, 5}) {
      auto q = sigma_even_plan(k, ThetaMode(th));
      CHECK(q.even_target % 2 == 0);
      CHECK(q.tau_drop < 2.0);
    }
}

TEST_CASE("bracketed solver rejects a bracket without sign change") {
  RootConfig cfg;
  cfg.lo = 1.0;
  cfg.hi = 2.0;
  CHECK_THROWS(solve_bracketed([](double x) { return x * x + 1; }, [](double x) { return 2 * x; }, cfg));
  cfg.lo = 0.0;
  const double r = solve_bracketed([](double x) { return x * x - 2; }, [](double x) { return 2 * x; }, cfg);
  CHECK(std::abs(r - std::sqrt(2.0)) < 1e-12);
}
