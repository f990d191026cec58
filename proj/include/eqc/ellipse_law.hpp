#pragma once

#include "eqc/random.hpp"

namespace eqc {

// The filled ellipse x^2/(1+tau)^2 + y^2/(1-tau)^2 <= 1, -1 < tau < 1.
class EllipseParams {
 public:
  explicit EllipseParams(double tau);

  double tau() const { return tau_; }
  double semi_axis_x() const { return 1.0 + tau_; }
  double semi_axis_y() const { return 1.0 - tau_; }
  double area() const;

 private:
  double tau_;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Rejection sampling from the bounding box; throws std::runtime_error after
// 10^6 consecutive rejections.
Point2 sample_uniform_ellipse(const EllipseParams& params, Rng& rng);

// Density of Re z under the uniform law: 2 sqrt((1+tau)^2 - s^2) / (pi (1+tau)^2).
double real_marginal_density(double s, double tau);

// Mass of {Re z >= s}.
double tail_mass(double s, double tau);

// The abscissa s with tail_mass(s, tau) = gamma, by bisection down to an
// interval width of tol * (1 + tau).
double s_gamma(double gamma, double tau, double tol = 1e-14);

}  // namespace eqc
