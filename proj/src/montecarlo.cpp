#include "eqc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eqc/ellipse_law.hpp"
#include "eqc/errors.hpp"
#include "eqc/gee.hpp"
#include "eqc/special_functions.hpp"

namespace eqc {

IntervalB::IntervalB(ExtendedReal lo, ExtendedReal hi) : lo_(lo), hi_(hi) {
  if (!(lo < hi)) throw domain_error("IntervalB: need lo < hi");
}

bool IntervalB::contains(double x) const {
  const auto v = ExtendedReal::finite(x);
  return lo_ <= v && v < hi_;
}

namespace {

constexpr std::uint64_t kLhsStream = 0x4c4853;  // "LHS"
constexpr std::uint64_t kRhsStream = 0x524853;  // "RHS"

}  // namespace

std::vector<double> en_m_trial_values(int n, int m, const ModelParams& p, const IntervalB& B, std::int64_t n_trials,
                                      std::uint64_t seed, EigenIndex index) {
  const TauB tb = derive_tau_b(p);
  if (n < 1) throw domain_error("estimate_EN_m: n must be >= 1");
  if (m < 0 || m + 1 > n) throw domain_error("estimate_EN_m: need 0 <= m <= n - 1");
  if (index == EigenIndex::m && m < 1) throw domain_error("estimate_EN_m: the lambda_m variant needs m >= 1");
  if (n_trials < 1) throw domain_error("estimate_EN_m: n_trials must be >= 1");
  const int which = index == EigenIndex::m_plus_one ? m + 1 : m;
  const double tau = tb.tau;
  const double b2 = tb.b * tb.b;
  const double log_prefactor = std::log(2.0) + 0.5 * std::log((1.0 + tau) / (b2 + tau)) + (1.0 - n) * std::log(tb.b);
  const double quad = n * (1.0 - b2) / (2.0 * (b2 + tau) * (1.0 + tau));
  const double sqrt_dphi1 = std::sqrt(p.dphi1);
  return run_trials(n_trials, [&](std::int64_t i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    const auto s = spectrum(sample_gee(n, tau, rng), static_cast<std::uint64_t>(i));
    const auto l = lambda_m(s, which);
    if (!l.is_real) return 0.0;
    const double x = l.value.real();
    if (!B.contains(sqrt_dphi1 * x)) return 0.0;
    return std::exp(log_prefactor - quad * x * x);
  });
}

MCEstimate estimate_EN_m(int n, int m, const ModelParams& p, const IntervalB& B, std::int64_t n_trials,
                         std::uint64_t seed, EigenIndex index) {
  const auto v = en_m_trial_values(n, m, p, B, n_trials, seed, index);
  return summarize(v, seed);
}

namespace {

// Per-trial left side of the dimension-raising identity for a fixed panel count.
double uppingdim_lhs_trial(const Spectrum& s, int m, double tau, double t_lo, double t_hi, int panels,
                           const GaussRule& rule) {
  const int dim = s.n;  // n - 1
  std::vector<double> breaks;
  breaks.reserve(static_cast<std::size_t>(panels + 1 + dim));
  for (int k = 0; k <= panels; ++k) breaks.push_back(t_lo + (t_hi - t_lo) * k / panels);
  for (const auto& e : s.eigenvalues) {
    const double r = e.value.real();
    if (r > t_lo && r < t_hi) breaks.push_back(r);
  }
  std::sort(breaks.begin(), breaks.end());
  const double gauss = dim / (2.0 * (1.0 + tau));
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k];
    const double b = breaks[k + 1];
    if (b <= a) continue;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double piece = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double t = c + h * rule.nodes[q];
      if (count_unstable(s, t) != m) continue;
      double det = 1.0;
      for (const auto& e : s.eigenvalues) det *= std::abs(e.value - t);
      piece += rule.weights[q] * det * std::exp(-gauss * t * t);
    }
    total += h * piece;
  }
  return total;
}

}  // namespace

UppingDimReport verify_uppingdim(int n, int m, double tau, const IntervalB& B_f, const QuadratureSpec& t_quadrature,
                                 std::int64_t n_trials, std::uint64_t seed) {
  t_quadrature.validate();
  if (n < 2) throw domain_error("verify_uppingdim: n must be >= 2");
  if (m < 1 || m > n - 1) throw domain_error("verify_uppingdim: need 1 <= m <= n - 1");
  if (!(tau > -1.0 && tau < 1.0)) throw domain_error("verify_uppingdim: tau must lie in (-1, 1)");
  if (n_trials < 2) throw domain_error("verify_uppingdim: n_trials must be >= 2");

  const double root = std::sqrt(n - 1.0);
  // beyond this |t| the Gaussian factor is below e^{-80} of its peak
  const double cutoff = std::max(10.0, std::sqrt(160.0 * (1.0 + tau) / (n - 1.0)));
  const double t_lo = B_f.lo().is_finite() ? std::max(B_f.lo().value() / root, -cutoff) : -cutoff;
  const double t_hi = B_f.hi().is_finite() ? std::min(B_f.hi().value() / root, cutoff) : cutoff;

  UppingDimReport report;
  const std::uint64_t lhs_seed = stream_seed(seed, kLhsStream);
  const std::uint64_t rhs_seed = stream_seed(seed, kRhsStream);

  if (t_hi <= t_lo) {
    report.lhs = summarize(std::vector<double>(static_cast<std::size_t>(n_trials), 0.0), lhs_seed);
  } else {
    const GaussRule rule = gauss_legendre(16);
    auto pass = [&](int panels) {
      const auto v = run_trials(n_trials, [&](std::int64_t i) {
        Rng rng = substream(lhs_seed, static_cast<std::uint64_t>(i));
        const auto s = spectrum(sample_gee(n - 1, tau, rng), static_cast<std::uint64_t>(i));
        return uppingdim_lhs_trial(s, m, tau, t_lo, t_hi, panels, rule);
      });
      return summarize(v, lhs_seed);
    };
    int panels = 1;
    MCEstimate coarse = pass(panels);
    while (true) {
      const MCEstimate fine = pass(2 * panels);
      panels *= 2;
      const bool settled = std::abs(fine.mean - coarse.mean) <= fine.std_error;
      coarse = fine;
      if (settled) break;
      if (panels >= t_quadrature.max_subdivisions) throw quadrature_error(fine.mean, std::abs(fine.mean - coarse.mean));
    }
    report.lhs = coarse;
    report.panels = panels;
  }

  const double log_const = log_gamma_half(n) + 0.5 * n * std::log(2.0) + 0.5 * std::log1p(tau) -
                           0.5 * n * std::log(n - 1.0);
  const double constant = std::exp(log_const);
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const auto rhs = run_trials(n_trials, [&](std::int64_t i) {
    Rng rng = substream(rhs_seed, static_cast<std::uint64_t>(i));
    const auto s = spectrum(sample_gee(n, tau, rng), static_cast<std::uint64_t>(i));
    const auto l = lambda_m(s, m + 1);
    return (l.is_real && B_f.contains(sqrt_n * l.value.real())) ? constant : 0.0;
  });
  report.rhs = summarize(rhs, rhs_seed);
  report.z_score = z_score(report.lhs, report.rhs);
  return report;
}

std::vector<TailRateRow> empirical_tail_rate(const std::vector<int>& n_list, int m, double x, double tau,
                                             std::int64_t n_trials, std::uint64_t seed) {
  if (!(tau > -1.0 && tau < 1.0)) throw domain_error("empirical_tail_rate: tau must lie in (-1, 1)");
  if (!(x > 1.0 + tau)) throw domain_error("empirical_tail_rate: x must exceed the ellipse edge 1 + tau");
  if (m < 1) throw domain_error("empirical_tail_rate: m must be >= 1");
  if (n_trials < 2) throw domain_error("empirical_tail_rate: n_trials must be >= 2");
  const double reference = m * rate_function_I(x, tau).value();
  std::vector<TailRateRow> rows;
  for (int n : n_list) {
    if (n < m) throw domain_error("empirical_tail_rate: every n must be >= m");
    const std::uint64_t s_seed = stream_seed(seed, static_cast<std::uint64_t>(n));
    const auto hits = run_trials(n_trials, [&](std::int64_t i) {
      Rng rng = substream(s_seed, static_cast<std::uint64_t>(i));
      const auto l = lambda_m(spectrum(sample_gee(n, tau, rng), static_cast<std::uint64_t>(i)), m);
      return (l.is_real && l.value.real() >= x) ? 1.0 : 0.0;
    });
    TailRateRow row;
    row.n = n;
    row.probability = summarize(hits, s_seed);
    row.hits = static_cast<std::int64_t>(std::llround(row.probability.mean * static_cast<double>(n_trials)));
    row.rate_hat = row.hits > 0 ? -std::log(row.probability.mean) / n : std::numeric_limits<double>::infinity();
    row.reference = reference;
    row.insufficient_hits = row.hits < 30;
    rows.push_back(row);
  }
  return rows;
}

double empirical_spectral_test(int n, double tau, std::int64_t n_trials, std::uint64_t seed) {
  if (n < 50) throw domain_error("empirical_spectral_test: n must be >= 50");
  if (n_trials < 1) throw domain_error("empirical_spectral_test: n_trials must be >= 1");
  const EllipseParams ellipse(tau);
  const auto per_trial = run_trials(n_trials, [&](std::int64_t i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    const auto s = spectrum(sample_gee(n, ellipse.tau(), rng), static_cast<std::uint64_t>(i));
    std::vector<double> re;
    re.reserve(s.eigenvalues.size());
    for (const auto& e : s.eigenvalues) re.push_back(e.value.real());
    return re;
  });
  std::vector<double> pooled;
  pooled.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n_trials));
  for (const auto& v : per_trial) pooled.insert(pooled.end(), v.begin(), v.end());
  std::sort(pooled.begin(), pooled.end());
  const double total = static_cast<double>(pooled.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    const double cdf = 1.0 - tail_mass(pooled[i], tau);
    ks = std::max({ks, (i + 1.0) / total - cdf, cdf - i / total});
  }
  return ks;
}

std::vector<ConcentrationRow> concentration_lambda_mN(const std::vector<int>& n_list, double gamma, double tau,
                                                      std::int64_t n_trials, double epsilon, std::uint64_t seed) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw domain_error("concentration_lambda_mN: gamma must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw domain_error("concentration_lambda_mN: epsilon must be > 0");
  if (n_trials < 1) throw domain_error("concentration_lambda_mN: n_trials must be >= 1");
  const double s = s_gamma(gamma, tau);
  std::vector<ConcentrationRow> rows;
  for (int n : n_list) {
    if (n < 1) throw domain_error("concentration_lambda_mN: n must be >= 1");
    const int m = std::clamp(static_cast<int>(std::ceil(gamma * n)), 1, n);
    const std::uint64_t s_seed = stream_seed(seed, static_cast<std::uint64_t>(n));
    const auto miss = run_trials(n_trials, [&](std::int64_t i) {
      Rng rng = substream(s_seed, static_cast<std::uint64_t>(i));
      const double re = lambda_m(spectrum(sample_gee(n, tau, rng), static_cast<std::uint64_t>(i)), m).value.real();
      return (re > s - epsilon && re < s + epsilon) ? 0.0 : 1.0;
    });
    rows.push_back({n, m, s, summarize(miss, s_seed)});
  }
  return rows;
}

}  // namespace eqc
