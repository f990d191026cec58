#include "eqc/ellipse_law.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "eqc/errors.hpp"

namespace eqc {

EllipseParams::EllipseParams(double tau) : tau_(tau) {
  if (!(tau > -1.0 && tau < 1.0)) throw domain_error("EllipseParams: tau must lie in (-1, 1)");
}

double EllipseParams::area() const { return std::numbers::pi * semi_axis_x() * semi_axis_y(); }

Point2 sample_uniform_ellipse(const EllipseParams& params, Rng& rng) {
  const double ax = params.semi_axis_x();
  const double ay = params.semi_axis_y();
  std::uniform_real_distribution<double> ux(-ax, ax);
  std::uniform_real_distribution<double> uy(-ay, ay);
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    const Point2 p{ux(rng), uy(rng)};
    if ((p.x / ax) * (p.x / ax) + (p.y / ay) * (p.y / ay) <= 1.0) return p;
  }
  throw std::runtime_error("sample_uniform_ellipse: 10^6 consecutive rejections, random source is broken");
}

double real_marginal_density(double s, double tau) {
  const double R = EllipseParams(tau).semi_axis_x();
  if (std::abs(s) > R) return 0.0;
  return 2.0 * std::sqrt(R * R - s * s) / (std::numbers::pi * R * R);
}

double tail_mass(double s, double tau) {
  const double R = EllipseParams(tau).semi_axis_x();
  if (s >= R) return 0.0;
  if (s <= -R) return 1.0;
  const double u = s / R;
  return 0.5 - (u * std::sqrt(1.0 - u * u) + std::asin(u)) / std::numbers::pi;
}

double s_gamma(double gamma, double tau, double tol) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw domain_error("s_gamma: gamma must lie in (0, 1)");
  if (!(tol > 0.0)) throw domain_error("s_gamma: tol must be > 0");
  // the marginal is even, so the median is exactly 0
  if (gamma == 0.5) return 0.0;
  const double R = EllipseParams(tau).semi_axis_x();
  double lo = -R * (1.0 - 1e-14);
  double hi = R * (1.0 - 1e-14);
  // tail_mass is strictly decreasing in s on the support
  while (hi - lo > tol * R) {
    const double mid = 0.5 * (lo + hi);
    const double t = tail_mass(mid, tau);
    if (t == gamma) return mid;
    if (t > gamma)
      lo = mid;
    else
      hi = mid;
    if (mid == lo && mid == hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace eqc
