#include "eqc/estimate.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace eqc {

MCEstimate summarize(std::span<const double> values, std::uint64_t seed) {
  MCEstimate e;
  e.n_trials = static_cast<std::int64_t>(values.size());
  e.seed = seed;
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return e;
  double ss = 0.0;
  for (double v : values) ss += (v - e.mean) * (v - e.mean);
  const double var = ss / static_cast<double>(values.size() - 1);
  e.std_error = std::sqrt(var / static_cast<double>(values.size()));
  return e;
}

double z_score(const MCEstimate& a, const MCEstimate& b) {
  const double diff = std::abs(a.mean - b.mean);
  const double se = std::hypot(a.std_error, b.std_error);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

unsigned worker_count() {
  if (const char* env = std::getenv("EQC_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace eqc
