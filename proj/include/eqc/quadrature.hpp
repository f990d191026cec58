#pragma once

#include <functional>
#include <vector>

namespace eqc {

// Tolerances shared by the quadrature-backed evaluators. `mc_samples` is the
// sample budget for the stratified fallback used by 2-D integrals.
struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
  int mc_samples = 100000;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

// Globally adaptive 15-point Gauss-Kronrod on [a, b]. Throws quadrature_error
// with the best estimate when max_subdivisions is exhausted.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSpec& spec);

// Same, summed over consecutive pieces [breaks[i], breaks[i+1]].
QuadResult integrate_adaptive(const std::function<double(double)>& f, const std::vector<double>& breaks,
                              const QuadratureSpec& spec);

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule (Newton iteration on P_n).
GaussRule gauss_legendre(int n);

}  // namespace eqc
