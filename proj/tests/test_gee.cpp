#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "eqc/errors.hpp"
#include "eqc/gee.hpp"
#include "oracles.hpp"

using namespace eqc;

namespace {

Eigen::MatrixXd random_matrix(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return m;
}

double density(std::vector<double> s, std::vector<double> x, std::vector<double> y, int n, double tau) {
  return std::exp(log_density_Pnk(s, x, y, n, tau));
}

}  // namespace

TEST_CASE("ensemble covariance at n = 50") {
  const int n = 50, trials = 10000;
  std::vector<double> cross(trials), off(trials), diag(trials);
  for (int t = 0; t < trials; ++t) {
    Rng rng = substream(21, t);
    const auto x = sample_gee(n, 0.5, rng).entries;
    cross[t] = n * x(0, 1) * x(1, 0);
    off[t] = n * x(0, 1) * x(0, 1);
    diag[t] = n * x(0, 0) * x(0, 0);
  }
  const auto c = summarize(cross, 0), o = summarize(off, 0), d = summarize(diag, 0);
  CHECK(std::abs(c.mean - 0.5) < 3 * c.std_error);
  CHECK(std::abs(o.mean - 1.0) < 3 * o.std_error);
  CHECK(std::abs(d.mean - 1.5) < 3 * d.std_error);
}

TEST_CASE("n = 1 variance and symmetric case") {
  std::vector<double> v(20000);
  for (std::size_t t = 0; t < v.size(); ++t) {
    Rng rng = substream(22, t);
    v[t] = std::pow(sample_gee(1, 0.6, rng).entries(0, 0), 2);
  }
  const auto e = summarize(v, 0);
  CHECK(std::abs(e.mean - 1.6) < 4 * e.std_error);
  Rng rng = substream(23, 0);
  const auto x = sample_gee(7, 1.0, rng).entries;
  CHECK(x == x.transpose());
  CHECK_THROWS_AS(sample_gee(3, -1.0, rng), domain_error);
  CHECK_THROWS_AS(sample_gee(3, 1.5, rng), domain_error);
}

TEST_CASE("spectrum ordering examples") {
  Eigen::MatrixXd d = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const auto s = spectrum(d);
  CHECK(s.k_real == 3);
  CHECK(s.eigenvalues[0].value.real() == 3.0);
  CHECK(s.eigenvalues[1].value.real() == 2.0);
  CHECK(s.eigenvalues[2].value.real() == 1.0);
  const auto l2 = lambda_m(s, 2);
  CHECK(l2.is_real);
  CHECK(l2.value == std::complex<double>(2.0, 0.0));
  CHECK_THROWS_AS(lambda_m(s, 4), index_error);
  CHECK_THROWS_AS(lambda_m(s, 0), index_error);

  Eigen::Matrix2d rot;
  rot << 0, -1, 1, 0;
  const auto r = spectrum(Eigen::MatrixXd(rot));
  CHECK(r.k_real == 0);
  const auto l1 = lambda_m(r, 1);
  CHECK_FALSE(l1.is_real);
  CHECK(std::abs(l1.value - std::complex<double>(0.0, 1.0)) < 1e-15);
  CHECK(lambda_m(r, 2).value.imag() < 0.0);
}

TEST_CASE("trace and determinant identities") {
  Rng rng = substream(24, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd m = random_matrix(8, rng);
    const auto s = spectrum(m);
    std::complex<double> sum = 0.0, prod = 1.0;
    for (const auto& e : s.eigenvalues) {
      sum += e.value;
      prod *= e.value;
    }
    CHECK(sum.real() == doctest::Approx(m.trace()).epsilon(1e-8));
    CHECK(prod.real() == doctest::Approx(m.determinant()).epsilon(1e-8));
  }
}

TEST_CASE("conjugate closure and realness flags") {
  for (int t = 0; t < 200; ++t) {
    Rng rng = substream(25, t);
    const auto s = spectrum(sample_gee(9, 0.2, rng));
    int k = 0;
    for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
      const auto& e = s.eigenvalues[j];
      if (e.is_real) {
        ++k;
        CHECK(e.value.imag() == 0.0);
      } else {
        CHECK(e.value.imag() != 0.0);
        if (e.value.imag() > 0.0) {
          REQUIRE(j + 1 < s.eigenvalues.size());
          CHECK(s.eigenvalues[j + 1].value == std::conj(e.value));
        }
      }
      if (j > 0) CHECK(s.eigenvalues[j - 1].value.real() >= e.value.real());
    }
    CHECK(k == s.k_real);
    CHECK((s.n - k) % 2 == 0);
  }
}

TEST_CASE("count_unstable") {
  Eigen::MatrixXd d = Eigen::Vector2d(1, -1).asDiagonal();
  const auto s = spectrum(d);
  CHECK(count_unstable(s, 0.0) == 1);
  CHECK(count_unstable(s, -5.0) == 2);
  CHECK(count_unstable(s, 5.0) == 0);
}

TEST_CASE("count_unstable agrees with a direct eigensolve of the shifted matrix") {
  std::uniform_real_distribution<double> ut(-1.5, 1.5);
  for (int t = 0; t < 1000; ++t) {
    Rng rng = substream(26, t);
    const auto x = sample_gee(6, 0.3, rng).entries;
    const double shift = ut(rng);
    const Eigen::EigenSolver<Eigen::MatrixXd> es(x - shift * Eigen::MatrixXd::Identity(6, 6), false);
    const auto direct = (es.eigenvalues().real().array() >= 0.0).count();
    CHECK(count_unstable(spectrum(x), shift) == direct);
  }
}

TEST_CASE("shift equivariance") {
  for (int t = 0; t < 50; ++t) {
    Rng rng = substream(27, t);
    const auto x = sample_gee(7, -0.4, rng).entries;
    const double shift = 0.37;
    const auto a = spectrum(x);
    const auto b = spectrum(Eigen::MatrixXd(x - shift * Eigen::MatrixXd::Identity(7, 7)));
    CHECK(a.k_real == b.k_real);
    for (int j = 0; j < 7; ++j) CHECK(std::abs(a.eigenvalues[j].value - shift - b.eigenvalues[j].value) < 1e-10);
  }
}

TEST_CASE("joint density anchors") {
  const std::vector<double> none;
  CHECK(log_density_Pnk(std::vector<double>{0.0}, none, none, 1, 0.0) ==
        doctest::Approx(-0.5 * std::log(2 * std::numbers::pi)).epsilon(1e-14));
  const std::vector<double> s = {0.3, -0.8, 1.1};
  std::vector<double> p = {1.1, 0.3, -0.8};
  const std::vector<double> x = {0.2}, y = {0.5};
  CHECK(log_density_Pnk(s, x, y, 5, 0.4) == doctest::Approx(log_density_Pnk(p, x, y, 5, 0.4)).epsilon(1e-14));
  p = {0.3, 0.3, 1.1};
  CHECK(std::isinf(log_density_Pnk(p, x, y, 5, 0.4)));
  CHECK_THROWS_AS(log_density_Pnk(s, x, y, 5, 1.0), domain_error);
  CHECK_THROWS_AS(log_density_Pnk(s, none, none, 4, 0.0), domain_error);
}

TEST_CASE("n = 2 sector masses sum to one and match sampling") {
  for (double tau : {0.0, 0.4}) {
    // k = 2 over sigma1 > sigma2 in (u, v) = (sigma1 - sigma2, sigma1 + sigma2)
    const double k2 = 0.5 * eqc_test::simpson2(
                                [&](double u, double v) { return density({(v + u) / 2, (v - u) / 2}, {}, {}, 2, tau); },
                                0.0, 14.0, -10.0, 10.0, 600, 600);
    const double k0 =
        eqc_test::simpson2([&](double xx, double yy) { return density({}, {xx}, {yy}, 2, tau); }, -7.0, 7.0, 0.0, 7.0,
                           600, 600);
    CAPTURE(tau);
    CHECK(k0 + k2 == doctest::Approx(1.0).epsilon(1e-6));
    if (tau == 0.0) CHECK(k2 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    const auto mc = prob_k_real(2, tau, 100000, 28);
    CHECK(std::abs(mc.prob[2].mean - k2) < 3 * mc.prob[2].std_error);
    CHECK(std::abs(mc.prob[0].mean - k0) < 3 * mc.prob[0].std_error);
  }
}

TEST_CASE("prob_k_real bookkeeping") {
  const auto one = prob_k_real(1, 0.0, 100, 29);
  CHECK(one.prob[1].mean == 1.0);
  const auto d = prob_k_real(5, 0.1, 2000, 30);
  double total = 0.0;
  std::int64_t count = 0;
  for (std::size_t k = 0; k < d.prob.size(); ++k) {
    total += d.prob[k].mean;
    count += d.counts[k];
    if (k % 2 == 0) CHECK(d.counts[k] == 0);
  }
  CHECK(count == 2000);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("realness of lambda_1 at n = 2 matches prob_k_real") {
  const int trials = 100000;
  std::vector<double> real1(trials);
  for (int t = 0; t < trials; ++t) {
    Rng rng = substream(31, t);
    real1[t] = lambda_m(spectrum(sample_gee(2, 0.0, rng)), 1).is_real ? 1.0 : 0.0;
  }
  const auto a = summarize(real1, 0);
  const auto b = prob_k_real(2, 0.0, trials, 32).prob[2];
  CHECK(z_score(a, b) < 4.0);
}
