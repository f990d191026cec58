#pragma once

#include <string>
#include <string_view>

#include "eqc/extended_real.hpp"

namespace eqc {

// Covariance data of the field at q = 1: Phi_1(1), Phi_1'(1), Phi_2(1) and the
// variance sigma^2 of the constant shift h.
struct ModelParams {
  double phi1 = 1.0;
  double dphi1 = 2.0;
  double phi2 = 0.0;
  double sigma2 = 0.0;
};

struct TauB {
  double tau = 0.0;
  double b = 0.0;
};

// tau = Phi_2(1)/Phi_1'(1), b = sqrt((sigma^2 + Phi_1(1))/Phi_1'(1)).
// Throws constraint_error naming the first violated inequality among
//   0 < phi1 < dphi1, -phi1 <= phi2 <= phi1, sigma2 >= 0, b^2 + tau > 0, tau != 1.
TauB derive_tau_b(const ModelParams& p);

enum class RateBranch { fixed_m, diverging, lagrange_straddle, lagrange_above, lagrange_below };

std::string_view to_string(RateBranch b);

struct RateResult {
  ExtendedReal rate;
  RateBranch branch = RateBranch::fixed_m;
  // Set when an interval endpoint sits exactly on the edge (1+tau) sqrt(dphi1)
  // and the value was taken by continuity.
  bool boundary_warning = false;
};

// log(1/b) - (1-b^2)(1+tau)/(2(b^2+tau)), the exponential rate of the expected
// number of equilibria with a fixed number of unstable directions.
// Requires 0 < b < 1, -1 < tau < 1, b^2 + tau > 0.
RateResult rate_fixed_m(double b, double tau);

// The curve on which rate_fixed_m vanishes:
//   -(2 b^2 log b + 1 - b^2) / (2 log b + 1 - b^2),  0 < b < 1.
double threshold_tau(double b);

// log(1/b) - (1-b^2) s_gamma^2 / (2(b^2+tau)(1+tau)) for m(N)/N -> gamma.
RateResult rate_diverging(double b, double tau, double gamma);

// Which multiplicity of I_tau enters the Lagrange-multiplier rate.
//   m_plus_one : (m+1) I_tau, as in the three-branch rate formula (default)
//   m          : m I_tau, as in the prose description of the cutoff z0
enum class MultiplierConvention { m_plus_one, m };

// Rate for equilibria whose Lagrange multiplier lies in (c, d). With
// edge = (1+tau) sqrt(dphi1):
//   c < edge < d : rate_fixed_m
//   c > edge     : log(1/b) - (1-b^2)c^2/(2 dphi1 (b^2+tau)(1+tau)) - (m+1) I_tau(c/sqrt(dphi1))
//   d < edge     : -inf
// The second branch does not depend on d. An endpoint exactly at the edge is
// resolved by continuity (to the straddle value) with boundary_warning set.
RateResult rate_lagrange(double b, double tau, double dphi1, int m, ExtendedReal c, ExtendedReal d,
                         MultiplierConvention conv = MultiplierConvention::m_plus_one);

// The unique root above the edge of
//   g(c) = (1-b^2)c^2/(2 dphi1 (b^2+tau)(1+tau)) + (m+1) I_tau(c/sqrt(dphi1)) - log(1/b),
// found by bracketing and bisection to an interval width of tol. Since
// g(edge) = -rate_fixed_m(b, tau), the root exists only where that rate is
// positive; elsewhere domain_error.
double z0(double b, double tau, double dphi1, int m, double tol = 1e-12,
          MultiplierConvention conv = MultiplierConvention::m_plus_one);

// g(c) above; exposed for checking z0.
double z0_objective(double c, double b, double tau, double dphi1, int m,
                    MultiplierConvention conv = MultiplierConvention::m_plus_one);

}  // namespace eqc
