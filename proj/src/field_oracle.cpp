#include "eqc/field_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "eqc/errors.hpp"

namespace eqc {

int OracleResult::count(int m) const {
  return static_cast<int>(std::count_if(equilibria.begin(), equilibria.end(), [m](const Equilibrium& e) { return e.m == m; }));
}

std::int64_t LagrangeHistogram::total() const {
  std::int64_t t = underflow + overflow;
  for (const auto& [m, c] : counts)
    for (auto v : c) t += v;
  return t;
}

FieldSample sample_field(int n, double sigma2, Rng& rng) {
  if (n != 2 && n != 3) throw domain_error("sample_field: n must be 2 or 3");
  if (!(sigma2 >= 0.0) || !std::isfinite(sigma2)) throw domain_error("sample_field: sigma2 must be finite and >= 0");
  FieldSample fs;
  fs.n = n;
  fs.sigma2 = sigma2;
  std::normal_distribution<double> coupling(0.0, 1.0 / n);
  fs.J.resize(static_cast<std::size_t>(n * n * n));
  for (auto& v : fs.J) v = coupling(rng);
  std::normal_distribution<double> external(0.0, std::sqrt(sigma2));
  fs.h.resize(n);
  for (int i = 0; i < n; ++i) fs.h(i) = sigma2 > 0.0 ? external(rng) : 0.0;
  return fs;
}

Eigen::VectorXd field_f(const FieldSample& fs, const Eigen::VectorXd& x) {
  const int n = fs.n;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) f(i) += fs.coeff(i, j, k) * x(j) * x(k);
  return f;
}

Eigen::MatrixXd field_df(const FieldSample& fs, const Eigen::VectorXd& x) {
  const int n = fs.n;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) d(i, j) += (fs.coeff(i, j, k) + fs.coeff(i, k, j)) * x(k);
  return d;
}

FieldValue eval_field(const FieldSample& fs, const Eigen::VectorXd& x) {
  if (x.size() != fs.n) throw domain_error("eval_field: dimension mismatch");
  if (std::abs(x.squaredNorm() - fs.n) > 1e-8) throw domain_error("eval_field: point is off the sphere |x|^2 = n");
  const Eigen::VectorXd fh = field_f(fs, x) + fs.h;
  FieldValue out;
  out.lagrange = x.dot(fh) / fs.n;
  out.tangent = fh - out.lagrange * x;
  return out;
}

namespace {

// ---- circle ----

struct CircleEval {
  double g = 0.0;
  double lagrange = 0.0;
};

Eigen::VectorXd circle_point(double theta) {
  Eigen::VectorXd x(2);
  x << std::sqrt(2.0) * std::cos(theta), std::sqrt(2.0) * std::sin(theta);
  return x;
}

Eigen::VectorXd circle_tangent(double theta) {
  Eigen::VectorXd t(2);
  t << -std::sin(theta), std::cos(theta);
  return t;
}

CircleEval circle_g(const FieldSample& fs, double theta) {
  const Eigen::VectorXd x = circle_point(theta);
  const Eigen::VectorXd fh = field_f(fs, x) + fs.h;
  return {fh.dot(circle_tangent(theta)), x.dot(fh) / 2.0};
}

struct CirclePass {
  std::vector<Equilibrium> roots;
  bool degenerate = false;
};

CirclePass circle_pass(const FieldSample& fs, int grid, double refine_tol) {
  CirclePass pass;
  const double step = 2.0 * std::numbers::pi / grid;
  double prev_theta = 0.0;
  double prev_g = circle_g(fs, 0.0).g;
  for (int k = 1; k <= grid; ++k) {
    const double theta = k == grid ? 2.0 * std::numbers::pi : k * step;
    const double g = circle_g(fs, theta).g;
    // a grid value of exactly 0 counts with the interval it closes
    if ((prev_g < 0.0 && g >= 0.0) || (prev_g > 0.0 && g <= 0.0)) {
      double lo = prev_theta, hi = theta, g_lo = prev_g;
      while (hi - lo > refine_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = circle_g(fs, mid).g;
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm < 0.0) == (g_lo < 0.0)) {
          lo = mid;
          g_lo = gm;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      const Eigen::VectorXd x = circle_point(root);
      const Eigen::VectorXd t = circle_tangent(root);
      const CircleEval at = circle_g(fs, root);
      const double slope = std::sqrt(2.0) * (t.dot(field_df(fs, x) * t) - at.lagrange);
      if (std::abs(slope) < 1e-8) pass.degenerate = true;
      pass.roots.push_back({x, slope >= 0.0 ? 1 : 0, at.lagrange, std::abs(at.g)});
    }
    prev_theta = theta;
    prev_g = g;
  }
  return pass;
}

// ---- sphere ----

// Orthonormal basis of the tangent plane at x.
Eigen::Matrix<double, 3, 2> tangent_basis(const Eigen::Vector3d& x) {
  const Eigen::Vector3d u = x.normalized();
  const Eigen::Vector3d helper = std::abs(u.x()) < 0.6 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  const Eigen::Vector3d e1 = (helper - helper.dot(u) * u).normalized();
  Eigen::Matrix<double, 3, 2> e;
  e.col(0) = e1;
  e.col(1) = u.cross(e1);
  return e;
}

struct NewtonOutcome {
  bool converged = false;
  Eigen::Vector3d x;
};

NewtonOutcome sphere_newton(const FieldSample& fs, Eigen::Vector3d x, double tol) {
  const double radius = std::sqrt(3.0);
  constexpr int kMaxIter = 100;
  for (int it = 0; it < kMaxIter; ++it) {
    const FieldValue v = eval_field(fs, x);
    const double res = v.tangent.norm();
    if (res < tol) return {true, x};
    const auto e = tangent_basis(x);
    const Eigen::Matrix2d a = e.transpose() * (field_df(fs, x) - v.lagrange * Eigen::Matrix3d::Identity()) * e;
    const Eigen::Vector2d r = e.transpose() * v.tangent;
    Eigen::Vector2d delta = a.fullPivLu().solve(-r);
    if (!delta.allFinite()) return {false, x};
    const double len = delta.norm();
    if (len > 0.5) delta *= 0.5 / len;
    Eigen::Vector3d next = x + e * delta;
    next *= radius / next.norm();
    x = next;
  }
  const FieldValue v = eval_field(fs, x);
  return {v.tangent.norm() < tol, x};
}

struct SpherePass {
  std::vector<Equilibrium> roots;
  bool degenerate = false;
};

SpherePass sphere_pass(const FieldSample& fs, int level, double tol, double dedupe_radius) {
  SpherePass pass;
  const double radius = std::sqrt(3.0);
  for (const auto& v : icosphere_vertices(level)) {
    const NewtonOutcome out = sphere_newton(fs, radius * v, tol);
    if (!out.converged) continue;
    const bool seen = std::any_of(pass.roots.begin(), pass.roots.end(), [&](const Equilibrium& e) {
      return (e.position - out.x).norm() < dedupe_radius;
    });
    if (seen) continue;
    const Eigen::VectorXd x = out.x;
    const FieldValue fv = eval_field(fs, x);
    const auto e = tangent_basis(out.x);
    const Eigen::Matrix2d a =
        e.transpose() * (field_df(fs, x) - fv.lagrange * Eigen::Matrix3d::Identity()) * e;
    const Eigen::EigenSolver<Eigen::Matrix2d> es(a, false);
    int m = 0;
    for (int i = 0; i < 2; ++i) {
      const double re = es.eigenvalues()(i).real();
      if (std::abs(re) < 1e-10) pass.degenerate = true;
      if (re >= 0.0) ++m;
    }
    pass.roots.push_back({x, m, fv.lagrange, fv.tangent.norm()});
  }
  return pass;
}

std::array<int, 3> counts_by_m(const std::vector<Equilibrium>& eqs) {
  std::array<int, 3> c{};
  for (const auto& e : eqs) ++c[static_cast<std::size_t>(std::clamp(e.m, 0, 2))];
  return c;
}

}  // namespace

OracleResult find_equilibria_circle(const FieldSample& fs, int grid_size, double refine_tol) {
  if (fs.n != 2) throw domain_error("find_equilibria_circle: needs n = 2");
  if (grid_size < 8) throw domain_error("find_equilibria_circle: grid_size must be >= 8");
  if (!(refine_tol > 0.0)) throw domain_error("find_equilibria_circle: refine_tol must be > 0");
  OracleResult result;
  CirclePass prev = circle_pass(fs, grid_size, refine_tol);
  bool stable = false;
  for (int d = 1; d <= 6 && !stable; ++d) {
    CirclePass next = circle_pass(fs, grid_size << d, refine_tol);
    stable = next.roots.size() == prev.roots.size();
    prev = std::move(next);
  }
  result.equilibria = std::move(prev.roots);
  if (!stable) {
    result.flagged = true;
    result.flag_reason = "root count did not stabilize";
  } else if (prev.degenerate) {
    result.flagged = true;
    result.flag_reason = "degenerate root";
  } else if (result.count(0) != result.count(1)) {
    result.flagged = true;
    result.flag_reason = "stable and unstable counts differ";
  }
  return result;
}

OracleResult find_equilibria_sphere2(const FieldSample& fs, int mesh_level, double newton_tol, double dedupe_radius) {
  if (fs.n != 3) throw domain_error("find_equilibria_sphere2: needs n = 3");
  if (mesh_level < 0 || mesh_level > 6) throw domain_error("find_equilibria_sphere2: mesh_level must lie in [0, 6]");
  if (!(newton_tol > 0.0) || !(dedupe_radius > 0.0))
    throw domain_error("find_equilibria_sphere2: tolerances must be > 0");
  OracleResult result;
  SpherePass prev = sphere_pass(fs, mesh_level, newton_tol, dedupe_radius);
  bool stable = false;
  for (int extra = 1; extra <= 3 && !stable; ++extra) {
    SpherePass next = sphere_pass(fs, mesh_level + extra, newton_tol, dedupe_radius);
    stable = counts_by_m(next.roots) == counts_by_m(prev.roots);
    prev = std::move(next);
  }
  result.equilibria = std::move(prev.roots);
  int index_sum = 0;
  for (const auto& e : result.equilibria) index_sum += (e.m % 2 == 0) ? 1 : -1;
  if (!stable) {
    result.flagged = true;
    result.flag_reason = "root count did not stabilize";
  } else if (prev.degenerate) {
    result.flagged = true;
    result.flag_reason = "degenerate root";
  } else if (index_sum != 2) {
    result.flagged = true;
    result.flag_reason = "index sum differs from 2";
  }
  return result;
}

std::vector<Eigen::Vector3d> icosphere_vertices(int level) {
  if (level < 0) throw domain_error("icosphere_vertices: level must be >= 0");
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> v = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                                    {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
  for (auto& x : v) x.normalize();
  std::vector<std::array<int, 3>> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                           {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                           {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                           {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
      const int idx = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int a = mid(f[0], f[1]);
      const int b = mid(f[1], f[2]);
      const int c = mid(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }
  return v;
}

LagrangeHistogram lagrange_histogram(const std::vector<Equilibrium>& equilibria, int bins, double lo, double hi) {
  if (equilibria.empty()) throw domain_error("lagrange_histogram: empty equilibrium list");
  if (bins < 1) throw domain_error("lagrange_histogram: bins must be >= 1");
  if (!(lo < hi)) throw domain_error("lagrange_histogram: need lo < hi");
  LagrangeHistogram hist;
  hist.lo = lo;
  hist.hi = hi;
  hist.bins = bins;
  const double width = (hi - lo) / bins;
  for (const auto& e : equilibria) {
    auto& row = hist.counts[e.m];
    if (row.empty()) row.assign(static_cast<std::size_t>(bins), 0);
    if (e.lagrange < lo) {
      ++hist.underflow;
    } else if (e.lagrange >= hi) {
      ++hist.overflow;
    } else {
      const int k = std::min(bins - 1, static_cast<int>((e.lagrange - lo) / width));
      ++row[static_cast<std::size_t>(k)];
    }
  }
  return hist;
}

LagrangeHistogram lagrange_histogram(const std::vector<Equilibrium>& equilibria, int bins) {
  if (equilibria.empty()) throw domain_error("lagrange_histogram: empty equilibrium list");
  const auto [lo_it, hi_it] = std::minmax_element(equilibria.begin(), equilibria.end(),
                                                  [](const Equilibrium& a, const Equilibrium& b) {
                                                    return a.lagrange < b.lagrange;
                                                  });
  const double lo = lo_it->lagrange;
  double hi = hi_it->lagrange;
  hi = hi > lo ? std::nextafter(hi, std::numeric_limits<double>::infinity()) : lo + 1.0;
  return lagrange_histogram(equilibria, bins, lo, hi);
}

}  // namespace eqc
