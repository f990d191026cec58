#include "eqc/gee.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "eqc/errors.hpp"
#include "eqc/special_functions.hpp"

namespace eqc {

GeeMatrix sample_gee(int n, double tau, Rng& rng) {
  if (n < 1) throw domain_error("sample_gee: n must be >= 1");
  if (!(tau > -1.0 && tau <= 1.0)) throw domain_error("sample_gee: tau must lie in (-1, 1]");
  const double sp = std::sqrt(1.0 + tau);
  const double sm = std::sqrt(1.0 - tau);
  const double a = 0.5 * (sp + sm);
  const double b = 0.5 * (sp - sm);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = scale * normal(rng);
  GeeMatrix out{n, tau, a * g + b * g.transpose()};
  return out;
}

Spectrum spectrum(const Eigen::MatrixXd& m, std::uint64_t seed) {
  const auto n = static_cast<int>(m.rows());
  if (n < 1 || m.cols() != m.rows()) throw domain_error("spectrum: matrix must be square and nonempty");
  if (!m.allFinite()) throw eigensolver_error(seed, "spectrum: non-finite matrix entries");
  Spectrum s;
  s.n = n;
  s.eigenvalues.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    s.eigenvalues.push_back({{m(0, 0), 0.0}, true});
    s.k_real = 1;
    return s;
  }
  Eigen::RealSchur<Eigen::MatrixXd> schur(m, /*computeU=*/false);
  if (schur.info() != Eigen::Success) throw eigensolver_error(seed, "spectrum: real Schur iteration did not converge");
  const Eigen::MatrixXd& t = schur.matrixT();
  int i = 0;
  while (i < n) {
    if (i == n - 1 || t(i + 1, i) == 0.0) {
      s.eigenvalues.push_back({{t(i, i), 0.0}, true});
      ++s.k_real;
      ++i;
    } else {
      // standardized 2x2 block with a complex conjugate pair
      const double p = 0.5 * (t(i, i) - t(i + 1, i + 1));
      const double z = std::sqrt(std::abs(p * p + t(i + 1, i) * t(i, i + 1)));
      const double re = t(i + 1, i + 1) + p;
      s.eigenvalues.push_back({{re, z}, false});
      s.eigenvalues.push_back({{re, -z}, false});
      i += 2;
    }
  }
  std::stable_sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const SpectrumPoint& a, const SpectrumPoint& b) {
    if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
    return a.value.imag() > b.value.imag();
  });
  return s;
}

SpectrumPoint lambda_m(const Spectrum& s, int m) {
  if (m < 1 || m > s.n) throw index_error("lambda_m: index " + std::to_string(m) + " outside 1.." + std::to_string(s.n));
  return s.eigenvalues[static_cast<std::size_t>(m - 1)];
}

int count_unstable(const Spectrum& s, double t) {
  int c = 0;
  for (const auto& e : s.eigenvalues)
    if (e.value.real() - t >= 0.0) ++c;
  return c;
}

double log_density_Pnk(std::span<const double> sigmas, std::span<const double> xs, std::span<const double> ys, int n,
                       double tau) {
  if (!(tau > -1.0 && tau < 1.0)) throw domain_error("log_density_Pnk: tau must lie in (-1, 1)");
  if (xs.size() != ys.size()) throw domain_error("log_density_Pnk: xs and ys differ in length");
  const auto k = static_cast<int>(sigmas.size());
  const auto pairs = static_cast<int>(xs.size());
  if (n < 1 || k + 2 * pairs != n) throw domain_error("log_density_Pnk: need k + 2 * pairs == n");
  for (double y : ys)
    if (!(y >= 0.0)) throw domain_error("log_density_Pnk: imaginary parts must be >= 0");

  std::vector<std::complex<double>> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (double s : sigmas) pts.emplace_back(s, 0.0);
  for (int j = 0; j < pairs; ++j) {
    pts.emplace_back(xs[j], ys[j]);
    pts.emplace_back(xs[j], -ys[j]);
  }
  double log_vdm = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = std::abs(pts[i] - pts[j]);
      if (d == 0.0) return -std::numeric_limits<double>::infinity();
      log_vdm += std::log(d);
    }

  const double N = n;
  double acc = -log_KN(n, tau) + log_vdm + 0.5 * (n - k) * std::log(2.0);
  for (double s : sigmas) acc -= N * s * s / (2.0 * (1.0 + tau));
  const double erfc_scale = std::sqrt(2.0 * N / (1.0 - tau * tau));
  for (int j = 0; j < pairs; ++j) {
    acc -= N * (xs[j] * xs[j] - ys[j] * ys[j]) / (1.0 + tau);
    acc += log_erfc(erfc_scale * ys[j]);
  }
  return acc;
}

KRealDistribution prob_k_real(int n, double tau, std::int64_t n_trials, std::uint64_t seed) {
  if (n_trials < 1) throw domain_error("prob_k_real: n_trials must be >= 1");
  const auto ks = run_trials(n_trials, [&](std::int64_t i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    return spectrum(sample_gee(n, tau, rng), static_cast<std::uint64_t>(i)).k_real;
  });
  KRealDistribution out;
  out.counts.assign(static_cast<std::size_t>(n + 1), 0);
  for (int k : ks) ++out.counts[static_cast<std::size_t>(k)];
  const double total = static_cast<double>(n_trials);
  for (auto c : out.counts) {
    MCEstimate e;
    e.n_trials = n_trials;
    e.seed = seed;
    e.mean = static_cast<double>(c) / total;
    e.std_error = n_trials > 1 ? std::sqrt(e.mean * (1.0 - e.mean) / (total - 1.0)) : 0.0;
    out.prob.push_back(e);
  }
  return out;
}

}  // namespace eqc
