#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "eqc/ellipse_law.hpp"
#include "eqc/errors.hpp"
#include "eqc/rates.hpp"
#include "eqc/special_functions.hpp"

using namespace eqc;

namespace {

double fixed(double b, double tau) { return rate_fixed_m(b, tau).rate.value(); }

const ExtendedReal kNegInf = ExtendedReal::neg_inf();
const ExtendedReal kPosInf = ExtendedReal::pos_inf();
ExtendedReal fin(double v) { return ExtendedReal::finite(v); }

}  // namespace

TEST_CASE("derive_tau_b") {
  const auto tb = derive_tau_b({1.0, 2.0, 0.0, 0.2});
  CHECK(tb.tau == 0.0);
  CHECK(tb.b == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  auto violated = [](ModelParams p) {
    try {
      derive_tau_b(p);
    } catch (const constraint_error& e) {
      return e.constraint();
    }
    return std::string("none");
  };
  CHECK(violated({1.0, 2.0, 2.5, 0.0}) == "-phi1 <= phi2 <= phi1");
  CHECK(violated({1.0, 2.0, -1.0, 0.0}) == "b^2 + tau > 0");
  CHECK(violated({3.0, 2.0, 0.0, 0.0}) == "0 < phi1 < dphi1");
  CHECK(violated({0.0, 2.0, 0.0, 0.0}) == "0 < phi1 < dphi1");
  CHECK(violated({1.0, 2.0, 0.0, -0.1}) == "sigma2 >= 0");
  CHECK(violated({1.0, 1.0 + 1e-12, 1.0, 0.0}) == "none");
}

TEST_CASE("fixed-m rate") {
  CHECK(fixed(0.5, 0.0) == doctest::Approx(std::log(2.0) - 1.5).epsilon(1e-15));
  CHECK(std::abs(fixed(1.0 - 1e-9, 0.3)) < 1e-8);
  CHECK_THROWS_AS(rate_fixed_m(1.0, 0.0), domain_error);
  CHECK_THROWS_AS(rate_fixed_m(1.2, 0.0), domain_error);
  CHECK_THROWS_AS(rate_fixed_m(0.5, 1.0), domain_error);
  CHECK_THROWS_AS(rate_fixed_m(0.5, -0.3), constraint_error);
  CHECK(rate_fixed_m(0.5, 0.0).branch == RateBranch::fixed_m);
}

TEST_CASE("threshold curve") {
  for (int i = 0; i < 100; ++i) {
    const double b = 0.05 + 0.9 * (i + 0.5) / 100;
    CHECK(std::abs(fixed(b, threshold_tau(b))) < 1e-12);
  }
  CHECK(threshold_tau(1.0 - 1e-5) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(threshold_tau(1e-8)) < 0.06);
  CHECK(std::abs(threshold_tau(1e-300)) < 2e-3);
  CHECK_THROWS_AS(threshold_tau(0.0), domain_error);
  CHECK_THROWS_AS(threshold_tau(1.0), domain_error);
  // the rate grows with tau, so the curve separates the sign regions
  CHECK(fixed(0.6, threshold_tau(0.6) + 0.05) > 0.0);
  CHECK(fixed(0.6, threshold_tau(0.6) - 0.05) < 0.0);
}

TEST_CASE("diverging-index rate") {
  for (double b : {0.2, 0.5, 0.9})
    for (double tau : {-0.02, 0.0, 0.5}) {
      if (b * b + tau <= 0.0) continue;
      CHECK(rate_diverging(b, tau, 0.5).rate.value() == -std::log(b));
      for (double g : {0.1, 0.3, 0.45})
        CHECK(rate_diverging(b, tau, g).rate.value() ==
              doctest::Approx(rate_diverging(b, tau, 1 - g).rate.value()).epsilon(1e-12));
      double best = -std::numeric_limits<double>::infinity(), arg = 0.0;
      for (double g = 0.05; g < 0.96; g += 0.05) {
        const double r = rate_diverging(b, tau, g).rate.value();
        if (r > best) {
          best = r;
          arg = g;
        }
      }
      CHECK(arg == doctest::Approx(0.5).epsilon(1e-9));
    }
  CHECK_THROWS_AS(rate_diverging(0.5, 0.0, 0.0), domain_error);
  CHECK_THROWS_AS(rate_diverging(0.5, 0.0, 1.0), domain_error);
}

TEST_CASE("diverging rate approaches the fixed-m rate as gamma -> 0") {
  // near the edge 1 - s/(1+tau) ~ (3 pi gamma / (4 sqrt 2))^{2/3}, so the gap shrinks like gamma^{2/3}
  const double b = 0.6, tau = 0.2;
  double prev_gap = std::numeric_limits<double>::infinity();
  for (double g : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7}) {
    const double gap = std::abs(rate_diverging(b, tau, g).rate.value() - fixed(b, tau));
    CHECK(gap < prev_gap);
    const double predicted = (1 - b * b) * (1 + tau) / (b * b + tau) * std::pow(3 * std::numbers::pi * g / (4 * std::sqrt(2.0)), 2.0 / 3.0);
    CHECK(gap == doctest::Approx(predicted).epsilon(0.1));
    prev_gap = gap;
  }
}

TEST_CASE("Lagrange-multiplier rate branches") {
  const double b = 0.7, tau = 0.3, dphi1 = 2.0;
  const double edge = (1 + tau) * std::sqrt(dphi1);
  const auto all = rate_lagrange(b, tau, dphi1, 1, kNegInf, kPosInf);
  CHECK(all.branch == RateBranch::lagrange_straddle);
  CHECK(all.rate.value() == fixed(b, tau));
  const auto below = rate_lagrange(b, tau, dphi1, 1, kNegInf, fin(edge - 0.1));
  CHECK(below.rate.is_neg_inf());
  CHECK(below.branch == RateBranch::lagrange_below);
  const double c = edge + 0.4;
  const auto above = rate_lagrange(b, tau, dphi1, 2, fin(c), kPosInf);
  CHECK(above.branch == RateBranch::lagrange_above);
  const double expected = -std::log(b) - (1 - b * b) * c * c / (2 * dphi1 * (b * b + tau) * (1 + tau)) -
                          3 * rate_function_I(c / std::sqrt(dphi1), tau).value();
  CHECK(above.rate.value() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(rate_lagrange(b, tau, dphi1, 2, fin(c), fin(c + 0.01)).rate == above.rate);
  const auto prose = rate_lagrange(b, tau, dphi1, 2, fin(c), kPosInf, MultiplierConvention::m);
  CHECK(prose.rate.value() > above.rate.value());
  CHECK_THROWS_AS(rate_lagrange(b, tau, dphi1, 1, fin(1.0), fin(1.0)), domain_error);
  CHECK_THROWS_AS(rate_lagrange(b, tau, dphi1, -1, kNegInf, kPosInf), domain_error);
}

TEST_CASE("Lagrange-multiplier rate at the edge") {
  for (double tau : {-0.4, 0.0, 0.3, 0.8})
    for (double b : {0.3, 0.7, 0.95}) {
      if (b * b + tau <= 0.0) continue;
      const double dphi1 = 1.7;
      const double edge = (1 + tau) * std::sqrt(dphi1);
      const auto at = rate_lagrange(b, tau, dphi1, 2, fin(edge), kPosInf);
      CHECK(at.boundary_warning);
      CHECK(std::abs(at.rate.value() - fixed(b, tau)) < 1e-12);
      const auto just_above = rate_lagrange(b, tau, dphi1, 2, fin(std::nextafter(edge, 10.0)), kPosInf);
      CHECK(std::abs(just_above.rate.value() - fixed(b, tau)) < 1e-12);
      const auto d_at = rate_lagrange(b, tau, dphi1, 2, kNegInf, fin(edge));
      CHECK(d_at.boundary_warning);
      CHECK(d_at.rate.value() == fixed(b, tau));
    }
}

TEST_CASE("upper branch decreases in c") {
  const double b = 0.5, tau = 0.1, dphi1 = 2.0;
  const double edge = (1 + tau) * std::sqrt(dphi1);
  double prev = std::numeric_limits<double>::infinity();
  for (double c = edge + 0.01; c < edge + 5; c += 0.1) {
    const double r = rate_lagrange(b, tau, dphi1, 0, fin(c), kPosInf).rate.value();
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("full-line interval reproduces the fixed-m rate") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ub(0.05, 0.99), ut(-0.9, 0.99), ud(0.1, 5.0);
  std::uniform_int_distribution<int> um(0, 10);
  for (int i = 0; i < 100;) {
    const double b = ub(rng), tau = ut(rng);
    if (b * b + tau <= 0.0) continue;
    ++i;
    CHECK(rate_lagrange(b, tau, ud(rng), um(rng), kNegInf, kPosInf).rate == rate_fixed_m(b, tau).rate);
  }
}

TEST_CASE("cutoff z0") {
  const double dphi1 = 2.0, tol = 1e-12;
  for (double b : {0.3, 0.6, 0.9}) {
    const double tau = std::min(threshold_tau(b) + 0.1, 0.95);
    const double edge = (1 + tau) * std::sqrt(dphi1);
    for (int m : {0, 1, 3}) {
      const double z = z0(b, tau, dphi1, m, tol);
      CHECK(z > edge);
      CHECK(z0_objective(z - tol, b, tau, dphi1, m) < 0.0);
      CHECK(z0_objective(z + tol, b, tau, dphi1, m) > 0.0);
    }
  }
  // larger log(1/b) pushes the root out, at fixed tau
  const double tau = 0.9;
  double prev = std::numeric_limits<double>::infinity();
  for (double b = 0.1; b < 0.8; b += 0.1) {
    const double z = z0(b, tau, dphi1, 1, tol);
    CHECK(z < prev);
    prev = z;
  }
  CHECK(z0(0.5, 0.9, dphi1, 2, tol, MultiplierConvention::m) > z0(0.5, 0.9, dphi1, 2, tol));
  // below the threshold curve the objective is already positive at the edge
  CHECK_THROWS_AS(z0(0.5, 0.0, dphi1, 1, tol), domain_error);
}
