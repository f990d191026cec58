#include "eqc/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "eqc/errors.hpp"

namespace eqc {

namespace {

void require_tau_open(double tau, const char* where) {
  if (!(tau > -1.0 && tau < 1.0)) throw domain_error(std::string(where) + ": tau must lie in (-1, 1)");
}

// log(x sqrt(pi) e^{x^2} erfc(x)) for large x from the asymptotic series
// sum_k (-1)^k (2k-1)!! / (2x^2)^k, truncated at its smallest term.
double log_scaled_erfc_tail(double x) {
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = -term * (2.0 * k - 1.0) * inv;
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return std::log(sum);
}

}  // namespace

double erfc(double x) { return std::erfc(x); }

double log_erfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  return -x * x - std::log(x * std::sqrt(std::numbers::pi)) + log_scaled_erfc_tail(x);
}

ExtendedReal rate_function_I(double x, double tau) {
  require_tau_open(tau, "rate_function_I");
  if (x < 1.0 + tau) return ExtendedReal::pos_inf();
  double v;
  if (std::abs(tau) < 1e-12) {
    v = -std::log(x) + 0.5 * x * x - 0.5;
  } else {
    const double r = std::sqrt(x * x - 4.0 * tau);
    v = x * x / (2.0 * (1.0 + tau)) - x / (x + r) - std::log(0.5 * (x + r));
  }
  return ExtendedReal::finite(std::max(v, 0.0));
}

namespace {

// int_0^1 r log|z - r (p, q)| dr for z = (x, y), direction (p, q) != 0.
// With A = p^2 + q^2 the squared distance is A |r - rho|^2, rho complex, and
// int r log(r - rho) dr = ((r^2 - rho^2)/2) log(r - rho) - r^2/4 - rho r/2.
double radial_log_moment(double x, double y, double p, double q) {
  const double A = p * p + q * q;
  const double B = x * p + y * q;
  const double C = x * x + y * y;
  const double disc = std::max(A * C - B * B, 0.0);
  const std::complex<double> rho(B / A, std::sqrt(disc) / A);
  auto antiderivative = [&](double r) {
    const std::complex<double> d = r - rho;
    std::complex<double> head = 0.0;
    if (std::abs(d) > 0.0) head = 0.5 * (r * r - rho * rho) * std::log(d);
    return head - 0.25 * r * r - 0.5 * rho * r;
  };
  return 0.25 * std::log(A) + std::real(antiderivative(1.0) - antiderivative(0.0));
}

}  // namespace

double log_potential_phi(double x, double y, double tau, const QuadratureSpec& spec) {
  require_tau_open(tau, "log_potential_phi");
  spec.validate();
  const double ax = 1.0 + tau;
  const double ay = 1.0 - tau;
  // w = r (ax cos t, ay sin t) maps the unit disk onto the ellipse; the uniform
  // law becomes r dr dt / pi.
  auto integrand = [&](double t) { return radial_log_moment(x, y, ax * std::cos(t), ay * std::sin(t)); };

  const double two_pi = 2.0 * std::numbers::pi;
  double t_star = std::atan2(y / ay, x / ax);
  if (t_star < 0.0) t_star += two_pi;
  double t_opp = t_star + std::numbers::pi;
  if (t_opp >= two_pi) t_opp -= two_pi;
  std::vector<double> breaks{0.0, two_pi, t_star, t_opp};
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  QuadratureSpec scaled = spec;
  scaled.abs_tol = spec.abs_tol * std::numbers::pi;
  try {
    return integrate_adaptive(integrand, breaks, scaled).value / std::numbers::pi;
  } catch (const quadrature_error& e) {
    throw quadrature_error(e.estimate() / std::numbers::pi, e.error_bound() / std::numbers::pi);
  }
}

double psi_functional(double x, double y, double tau, const QuadratureSpec& spec) {
  return log_potential_phi(x, y, tau, spec) - x * x / (2.0 * (1.0 + tau)) - y * y / (2.0 * (1.0 - tau));
}

double log_gamma_half(int j) {
  if (j < 1) throw domain_error("log_gamma_half: j must be >= 1");
  // Gamma(1/2) = sqrt(pi), Gamma(1) = 1, Gamma(s + 1) = s Gamma(s)
  double acc = (j % 2 == 1) ? 0.5 * std::log(std::numbers::pi) : 0.0;
  for (int k = (j % 2 == 1) ? 1 : 2; k + 2 <= j; k += 2) acc += std::log(0.5 * k);
  return acc;
}

double log_KN(int n, double tau) {
  if (n < 1) throw domain_error("log_KN: n must be >= 1");
  if (!(tau > -1.0 && tau <= 1.0)) throw domain_error("log_KN: tau must lie in (-1, 1]");
  const double N = n;
  double sum_lg = 0.0;
  double lg_odd = 0.5 * std::log(std::numbers::pi);  // log Gamma(1/2)
  double lg_even = 0.0;                              // log Gamma(1)
  for (int j = 1; j <= n; ++j) {
    if (j % 2 == 1) {
      if (j > 1) lg_odd += std::log(0.5 * (j - 2));
      sum_lg += lg_odd;
    } else {
      if (j > 2) lg_even += std::log(0.5 * (j - 2));
      sum_lg += lg_even;
    }
  }
  return 0.25 * N * (N + 1.0) * std::log(2.0) + 0.5 * N * std::log1p(tau) - 0.25 * N * (N + 1.0) * std::log(N) +
         sum_lg;
}

}  // namespace eqc
