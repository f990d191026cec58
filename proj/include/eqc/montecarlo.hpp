#pragma once

#include <cstdint>
#include <vector>

#include "eqc/estimate.hpp"
#include "eqc/extended_real.hpp"
#include "eqc/quadrature.hpp"
#include "eqc/rates.hpp"

namespace eqc {

// Half-open interval [lo, hi) of the extended real line, lo < hi.
class IntervalB {
 public:
  IntervalB(ExtendedReal lo, ExtendedReal hi);
  static IntervalB whole_line() { return {ExtendedReal::neg_inf(), ExtendedReal::pos_inf()}; }
  static IntervalB finite(double lo, double hi) { return {ExtendedReal::finite(lo), ExtendedReal::finite(hi)}; }

  const ExtendedReal& lo() const { return lo_; }
  const ExtendedReal& hi() const { return hi_; }
  bool contains(double x) const;

 private:
  ExtendedReal lo_;
  ExtendedReal hi_;
};

// Which ordered eigenvalue feeds the estimator for E N_m(B).
//   m_plus_one : lambda_{m+1}, the index produced by inserting the shift as an
//                extra real eigenvalue (default; m = 0 counts stable equilibria)
//   m          : lambda_m, kept for comparison; requires m >= 1
enum class EigenIndex { m_plus_one, m };

// Per-trial values of
//   2 sqrt((1+tau)/(b^2+tau)) b^{1-n} exp(-n(1-b^2) l^2 / (2(b^2+tau)(1+tau))) 1_B(sqrt(dphi1) l)
// with l the selected eigenvalue of an n x n ensemble draw at tau = tau(p); a
// trial contributes 0 unless l is structurally real. Trial i uses
// substream(seed, i).
std::vector<double> en_m_trial_values(int n, int m, const ModelParams& p, const IntervalB& B,
                                      std::int64_t n_trials, std::uint64_t seed,
                                      EigenIndex index = EigenIndex::m_plus_one);

// Monte Carlo estimate of the expected number of equilibria with m unstable
// directions whose Lagrange multiplier lies in B.
MCEstimate estimate_EN_m(int n, int m, const ModelParams& p, const IntervalB& B, std::int64_t n_trials,
                         std::uint64_t seed, EigenIndex index = EigenIndex::m_plus_one);

struct UppingDimReport {
  MCEstimate lhs;
  MCEstimate rhs;
  double z_score = 0.0;
  int panels = 0;  // Gauss-Legendre panels used for the t integral
};

// Checks, for f = 1_{B_f},
//   int f(t sqrt(n-1)) exp(-(n-1)t^2/(2(1+tau))) E_{n-1}[|det(X - tI)| i_m(X - tI)] dt
//     = Gamma(n/2) 2^{n/2} sqrt(1+tau) / (n-1)^{n/2} * E_n[1_R(l_{m+1}) f(sqrt(n) l_{m+1})].
// Left side: per trial, the t integral is done with Gauss-Legendre panels that
// also break at the eigenvalue real parts of the (n-1) x (n-1) draw; the panel
// count doubles until the change in the mean is below the standard error.
// Right side: plain Monte Carlo over n x n draws. The two sides use
// independent streams derived from `seed`.
UppingDimReport verify_uppingdim(int n, int m, double tau, const IntervalB& B_f, const QuadratureSpec& t_quadrature,
                                 std::int64_t n_trials, std::uint64_t seed);

struct TailRateRow {
  int n = 0;
  std::int64_t hits = 0;
  MCEstimate probability;
  double rate_hat = 0.0;       // -(1/n) log P-hat; +inf when there are no hits
  double reference = 0.0;      // m I_tau(x)
  bool insufficient_hits = false;  // fewer than 30 hits
};

// Empirical large-deviation rate of {lambda_m real, lambda_m >= x}; requires x > 1 + tau.
std::vector<TailRateRow> empirical_tail_rate(const std::vector<int>& n_list, int m, double x, double tau,
                                             std::int64_t n_trials, std::uint64_t seed);

// Kolmogorov distance between the pooled real parts of all eigenvalues of
// n_trials draws and the real marginal of the uniform law on the ellipse.
double empirical_spectral_test(int n, double tau, std::int64_t n_trials, std::uint64_t seed);

struct ConcentrationRow {
  int n = 0;
  int m = 0;        // ceil(gamma n)
  double s = 0.0;   // s_gamma
  MCEstimate miss;  // fraction of draws with Re lambda_m outside (s - eps, s + eps)
};

std::vector<ConcentrationRow> concentration_lambda_mN(const std::vector<int>& n_list, double gamma, double tau,
                                                      std::int64_t n_trials, double epsilon, std::uint64_t seed);

}  // namespace eqc
