#include "eqc/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eqc/ellipse_law.hpp"
#include "eqc/errors.hpp"
#include "eqc/special_functions.hpp"

namespace eqc {

namespace {

std::string show(double v) { return format_double(v); }

void require_rate_domain(double b, double tau, const char* where) {
  if (!(b > 0.0)) throw domain_error(std::string(where) + ": b must be > 0");
  if (b >= 1.0) throw domain_error(std::string(where) + ": b >= 1 is the topologically trivial regime, not covered");
  if (!(tau > -1.0 && tau < 1.0)) throw domain_error(std::string(where) + ": tau must lie in (-1, 1)");
  if (!(b * b + tau > 0.0))
    throw constraint_error("b^2 + tau > 0", "b^2 + tau = " + show(b * b + tau));
}

double log_inv_b(double b) { return -std::log(b); }

double multiplicity(int m, MultiplierConvention conv) {
  return conv == MultiplierConvention::m_plus_one ? m + 1.0 : static_cast<double>(m);
}

}  // namespace

TauB derive_tau_b(const ModelParams& p) {
  if (!(p.phi1 > 0.0 && p.phi1 < p.dphi1))
    throw constraint_error("0 < phi1 < dphi1", "phi1 = " + show(p.phi1) + ", dphi1 = " + show(p.dphi1));
  if (!(p.phi2 >= -p.phi1 && p.phi2 <= p.phi1))
    throw constraint_error("-phi1 <= phi2 <= phi1", "phi1 = " + show(p.phi1) + ", phi2 = " + show(p.phi2));
  if (!(p.sigma2 >= 0.0)) throw constraint_error("sigma2 >= 0", "sigma2 = " + show(p.sigma2));
  const double tau = p.phi2 / p.dphi1;
  const double b2 = (p.sigma2 + p.phi1) / p.dphi1;
  if (!(b2 + tau > 0.0)) throw constraint_error("b^2 + tau > 0", "b^2 + tau = " + show(b2 + tau));
  if (tau == 1.0) throw constraint_error("tau != 1", "the gradient case tau = 1 is excluded");
  return {tau, std::sqrt(b2)};
}

std::string_view to_string(RateBranch b) {
  switch (b) {
    case RateBranch::fixed_m:
      return "fixed_m";
    case RateBranch::diverging:
      return "diverging";
    case RateBranch::lagrange_straddle:
      return "lagrange_straddle";
    case RateBranch::lagrange_above:
      return "lagrange_above";
    case RateBranch::lagrange_below:
      return "lagrange_below";
  }
  return "unknown";
}

RateResult rate_fixed_m(double b, double tau) {
  require_rate_domain(b, tau, "rate_fixed_m");
  const double b2 = b * b;
  const double v = log_inv_b(b) - (1.0 - b2) * (1.0 + tau) / (2.0 * (b2 + tau));
  return {ExtendedReal::finite(v), RateBranch::fixed_m, false};
}

double threshold_tau(double b) {
  if (!(b > 0.0 && b < 1.0)) throw domain_error("threshold_tau: b must lie in (0, 1)");
  const double b2 = b * b;
  const double lb = std::log(b);
  return -(2.0 * b2 * lb + 1.0 - b2) / (2.0 * lb + 1.0 - b2);
}

RateResult rate_diverging(double b, double tau, double gamma) {
  require_rate_domain(b, tau, "rate_diverging");
  if (!(gamma > 0.0 && gamma < 1.0)) throw domain_error("rate_diverging: gamma must lie in (0, 1)");
  const double b2 = b * b;
  const double s = s_gamma(gamma, tau);
  const double v = log_inv_b(b) - (1.0 - b2) * s * s / (2.0 * (b2 + tau) * (1.0 + tau));
  return {ExtendedReal::finite(v), RateBranch::diverging, false};
}

double z0_objective(double c, double b, double tau, double dphi1, int m, MultiplierConvention conv) {
  const double b2 = b * b;
  const auto I = rate_function_I(c / std::sqrt(dphi1), tau);
  if (!I.is_finite()) return -std::numeric_limits<double>::infinity();
  return (1.0 - b2) * c * c / (2.0 * dphi1 * (b2 + tau) * (1.0 + tau)) + multiplicity(m, conv) * I.value() -
         log_inv_b(b);
}

RateResult rate_lagrange(double b, double tau, double dphi1, int m, ExtendedReal c, ExtendedReal d,
                         MultiplierConvention conv) {
  require_rate_domain(b, tau, "rate_lagrange");
  if (!(dphi1 > 0.0)) throw domain_error("rate_lagrange: dphi1 must be > 0");
  if (m < 0) throw domain_error("rate_lagrange: m must be >= 0");
  if (!(c < d)) throw domain_error("rate_lagrange: need c < d");
  const auto edge = ExtendedReal::finite((1.0 + tau) * std::sqrt(dphi1));

  if (c < edge && edge < d) return {rate_fixed_m(b, tau).rate, RateBranch::lagrange_straddle, false};
  if (d < edge) return {ExtendedReal::neg_inf(), RateBranch::lagrange_below, false};
  if (d == edge) {
    // (c, edge): the limit from d > edge, where the interval straddles the edge
    return {rate_fixed_m(b, tau).rate, RateBranch::lagrange_straddle, true};
  }
  // c >= edge; at c == edge the upper branch meets the straddle value
  const double cv = c.value();
  const double b2 = b * b;
  const double v = log_inv_b(b) - (1.0 - b2) * cv * cv / (2.0 * dphi1 * (b2 + tau) * (1.0 + tau)) -
                   multiplicity(m, conv) * rate_function_I(std::max(cv / std::sqrt(dphi1), 1.0 + tau), tau).value();
  return {ExtendedReal::finite(v), RateBranch::lagrange_above, c == edge};
}

double z0(double b, double tau, double dphi1, int m, double tol, MultiplierConvention conv) {
  require_rate_domain(b, tau, "z0");
  if (!(dphi1 > 0.0)) throw domain_error("z0: dphi1 must be > 0");
  if (m < 0) throw domain_error("z0: m must be >= 0");
  if (!(tol > 0.0)) throw domain_error("z0: tol must be > 0");
  const double edge = (1.0 + tau) * std::sqrt(dphi1);
  auto g = [&](double c) { return z0_objective(c, b, tau, dphi1, m, conv); };
  // g(edge) = -rate_fixed_m(b, tau): a root above the edge needs a positive fixed-m rate
  if (!(g(edge) < 0.0))
    throw domain_error("z0: no root above the edge, the fixed-m rate at (b, tau) = (" + show(b) + ", " + show(tau) +
                       ") is not positive");
  double lo = edge;
  double hi = 2.0 * edge;
  while (g(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace eqc
