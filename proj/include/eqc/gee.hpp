#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "eqc/estimate.hpp"
#include "eqc/random.hpp"

namespace eqc {

// An n x n draw from the Gaussian elliptic ensemble,
//   E[X_ij X_lk] = (delta_il delta_jk + tau delta_ik delta_jl) / n.
struct GeeMatrix {
  int n = 0;
  double tau = 0.0;
  Eigen::MatrixXd entries;
};

// X = a G + b G^T with G_ij ~ N(0, 1/n) iid, a = (sqrt(1+tau) + sqrt(1-tau))/2,
// b = (sqrt(1+tau) - sqrt(1-tau))/2, so that a^2 + b^2 = 1 and 2ab = tau.
// Accepts -1 < tau <= 1.
GeeMatrix sample_gee(int n, double tau, Rng& rng);

struct SpectrumPoint {
  std::complex<double> value;
  bool is_real = false;  // 1x1 block of the real Schur form; implies value.imag() == 0
};

// Eigenvalues sorted by decreasing real part; a conjugate pair shares its real
// part and is listed with the positive imaginary part first.
struct Spectrum {
  std::vector<SpectrumPoint> eigenvalues;
  int k_real = 0;
  int n = 0;
};

// Real Schur decomposition; realness is read off the block structure, never
// from a threshold on the imaginary part. `seed` is only reported back in
// eigensolver_error.
Spectrum spectrum(const Eigen::MatrixXd& m, std::uint64_t seed = 0);
inline Spectrum spectrum(const GeeMatrix& m, std::uint64_t seed = 0) { return spectrum(m.entries, seed); }

// The m-th entry (1-based) of the ordered spectrum.
SpectrumPoint lambda_m(const Spectrum& s, int m);

// #{j : Re lambda_j - t >= 0}, the number of eigenvalues of X - tI with
// nonnegative real part.
int count_unstable(const Spectrum& s, double t);

// log of the joint eigenvalue density on S_k against
// mu^{(n,k)} = 2^{(n-k)/2} prod d sigma_i prod dx_j dy_j,
// with k = sigmas.size() real eigenvalues and pairs x_j +- i y_j.
// Returns -inf when two of the n points coincide. Requires -1 < tau < 1.
double log_density_Pnk(std::span<const double> sigmas, std::span<const double> xs, std::span<const double> ys,
                       int n, double tau);

struct KRealDistribution {
  std::vector<std::int64_t> counts;   // indexed by k = 0..n
  std::vector<MCEstimate> prob;       // counts[k] / n_trials with binomial standard errors
};

KRealDistribution prob_k_real(int n, double tau, std::int64_t n_trials, std::uint64_t seed);

}  // namespace eqc
