#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eqc/random.hpp"
#include "eqc/rates.hpp"

namespace eqc {

// F(x) = -lambda(x) x + f(x) + h on the sphere |x|^2 = n, with
// f_i(x) = sum_{j,k} J_ijk x_j x_k, J_ijk ~ N(0, n^-2) and h_i ~ N(0, sigma2).
// Then E[f_i(x) f_j(y)] = delta_ij (<x,y>/n)^2: Phi_1(q) = q^2, Phi_2 = 0.
struct FieldSample {
  int n = 0;
  std::vector<double> J;  // J[(i*n + j)*n + k]
  Eigen::VectorXd h;
  double sigma2 = 0.0;

  double coeff(int i, int j, int k) const { return J[static_cast<std::size_t>((i * n + j) * n + k)]; }
  // Phi_1(1) = 1, Phi_1'(1) = 2, Phi_2(1) = 0.
  ModelParams model_params() const { return {1.0, 2.0, 0.0, sigma2}; }
};

FieldSample sample_field(int n, double sigma2, Rng& rng);

// f(x) and its Jacobian D_ij = d f_i / d x_j.
Eigen::VectorXd field_f(const FieldSample& fs, const Eigen::VectorXd& x);
Eigen::MatrixXd field_df(const FieldSample& fs, const Eigen::VectorXd& x);

struct FieldValue {
  Eigen::VectorXd tangent;  // -lambda x + f(x) + h
  double lagrange = 0.0;    // lambda(x) = <x, f(x) + h> / n
};

// Throws domain_error when | |x|^2 - n | > 1e-8.
FieldValue eval_field(const FieldSample& fs, const Eigen::VectorXd& x);

struct Equilibrium {
  Eigen::VectorXd position;
  int m = 0;  // Jacobian eigenvalues with nonnegative real part
  double lagrange = 0.0;
  double residual = 0.0;  // tangential field norm at position
};

struct OracleResult {
  std::vector<Equilibrium> equilibria;
  bool flagged = false;  // count did not stabilize, or a degenerate root was met
  std::string flag_reason;

  int count(int m) const;
};

// n = 2. Scans g(theta) = <F(x(theta)), t(theta)>, x = sqrt2 (cos, sin), on a
// uniform grid, bisects each sign change down to refine_tol, and doubles the
// grid until two consecutive passes agree (at most 6 doublings). A root with
// |g'| < 1e-8 flags the sample.
OracleResult find_equilibria_circle(const FieldSample& fs, int grid_size = 2048, double refine_tol = 1e-14);

// n = 3. Newton on the two tangential equations from every vertex of an
// icosahedral mesh refined mesh_level times; roots closer than dedupe_radius
// merge. The mesh is refined once more until the per-m counts repeat (at most
// 3 extra levels). Any Jacobian eigenvalue with |Re| < 1e-10 flags the sample.
OracleResult find_equilibria_sphere2(const FieldSample& fs, int mesh_level = 2, double newton_tol = 1e-12,
                                     double dedupe_radius = 1e-6);

// Vertices of the icosahedron after `level` midpoint subdivisions, on the unit sphere.
std::vector<Eigen::Vector3d> icosphere_vertices(int level);

struct LagrangeHistogram {
  double lo = 0.0;
  double hi = 0.0;
  int bins = 0;
  std::map<int, std::vector<std::int64_t>> counts;  // by m
  std::int64_t underflow = 0;
  std::int64_t overflow = 0;

  std::int64_t total() const;
};

// Fixed range [lo, hi); values outside land in underflow/overflow.
LagrangeHistogram lagrange_histogram(const std::vector<Equilibrium>& equilibria, int bins, double lo, double hi);
// Range taken from the data (max value goes in the last bin).
LagrangeHistogram lagrange_histogram(const std::vector<Equilibrium>& equilibria, int bins);

}  // namespace eqc
