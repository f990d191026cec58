#pragma once

#include "eqc/extended_real.hpp"
#include "eqc/quadrature.hpp"

namespace eqc {

// (2/sqrt(pi)) * int_x^inf exp(-t^2) dt.
double erfc(double x);

// log(erfc(x)), finite for every finite x. Switches to the asymptotic
// expansion of the scaled function once erfc itself would underflow.
double log_erfc(double x);

// Large-deviation rate of a real outlier eigenvalue at x beyond the ellipse edge:
//   +inf                                              x < 1 + tau
//   x^2/(2(1+tau)) - x/(x+r) - log((x+r)/2),  r = sqrt(x^2 - 4 tau)   otherwise.
// The middle term is the cancellation-free form of x(x - r)/(4 tau); for
// |tau| < 1e-12 the tau = 0 expression -log x + x^2/2 - 1/2 is used.
ExtendedReal rate_function_I(double x, double tau);

// Logarithmic potential of the uniform law on the ellipse with semi-axes
// (1+tau, 1-tau), evaluated at x + iy.
double log_potential_phi(double x, double y, double tau, const QuadratureSpec& spec = {});

// phi(x, y) - x^2/(2(1+tau)) - y^2/(2(1-tau)).
double psi_functional(double x, double y, double tau, const QuadratureSpec& spec = {});

// log Gamma(j/2) for a positive integer j, by the half-integer recurrence.
double log_gamma_half(int j);

// log K_N(tau), the normalizer of the joint eigenvalue density of the N x N
// elliptic ensemble:
//   K_N = 2^{N(N+1)/4} (1+tau)^{N/2} N^{-N(N+1)/4} prod_{j=1}^N Gamma(j/2).
double log_KN(int n, double tau);

}  // namespace eqc
