#include "eqc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "eqc/errors.hpp"

namespace eqc {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: abs_tol must be > 0");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: rel_tol must be > 0");
  if (max_subdivisions < 1) throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
  if (mc_samples < 1) throw std::invalid_argument("QuadratureSpec: mc_samples must be >= 1");
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule; abscissae are the
// nonnegative half, x[1], x[3], x[5] (and 0) are the Gauss nodes.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXk[j];
    const double s = f(c - dx) + f(c + dx);
    kron += kWk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, const std::vector<double>& breaks,
                              const QuadratureSpec& spec) {
  spec.validate();
  if (breaks.size() < 2) throw std::invalid_argument("integrate_adaptive: need at least two break points");
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] <= breaks[i + 1])) throw std::invalid_argument("integrate_adaptive: break points not sorted");
    if (breaks[i] == breaks[i + 1]) continue;
    auto s = gk15(f, breaks[i], breaks[i + 1]);
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  int splits = 0;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) && !heap.empty()) {
    if (splits >= spec.max_subdivisions) throw quadrature_error(total, err);
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // interval at floating-point resolution; its error cannot shrink further
      throw quadrature_error(total, err);
    }
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // recompute the sums to shed accumulated rounding from the running updates
  total = 0.0;
  err = 0.0;
  std::vector<Segment> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  for (const auto& s : all) {
    total += s.value;
    err += s.error;
  }
  return {total, err, splits};
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec) {
  return integrate_adaptive(f, std::vector<double>{a, b}, spec);
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = n == 1 ? x : p1;
      const double pn1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

}  // namespace eqc
