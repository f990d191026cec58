#include "eqc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eqc/ellipse_law.hpp"
#include "eqc/errors.hpp"
#include "eqc/field_oracle.hpp"
#include "eqc/gee.hpp"
#include "eqc/montecarlo.hpp"
#include "eqc/rates.hpp"

namespace eqc::cli {

namespace {

struct io_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct gate_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, std::int64_t, std::string, ExtendedReal, bool>;
using Record = std::vector<std::pair<std::string, Cell>>;

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(double v) const { return ExtendedReal::from_double(v).to_string(); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(const ExtendedReal& v) const { return v.to_string(); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  } visit;
  return std::visit(visit, c);
}

nlohmann::ordered_json extended_json(const ExtendedReal& v) {
  if (v.is_finite()) return v.value();
  return nlohmann::ordered_json{{"extended", v.to_string()}};
}

nlohmann::ordered_json cell_json(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(double v) const {
      if (std::isnan(v)) return nullptr;
      return extended_json(ExtendedReal::from_double(v));
    }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    nlohmann::ordered_json operator()(const ExtendedReal& v) const { return extended_json(v); }
    nlohmann::ordered_json operator()(bool v) const { return v; }
  } visit;
  return std::visit(visit, c);
}

// One command's artifact: echoed config, derived quantities, result rows.
struct Report {
  std::string op;
  std::uint64_t seed = 0;
  Record params;
  Record derived;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void row(std::vector<Cell> r) {
    if (r.size() != columns.size()) throw std::logic_error("row width does not match the header");
    rows.push_back(std::move(r));
  }
};

void write_csv(const Report& r, std::ostream& os) {
  os << "# op=" << r.op << '\n' << "# version=" << kVersion << '\n' << "# seed=" << r.seed << '\n';
  for (const auto& [k, v] : r.params) os << "# " << k << '=' << cell_text(v) << '\n';
  for (const auto& [k, v] : r.derived) os << "# " << k << '=' << cell_text(v) << '\n';
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

void write_json(const Report& r, std::ostream& os) {
  nlohmann::ordered_json doc;
  doc["op"] = r.op;
  auto& params = doc["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = cell_json(v);
  if (!r.derived.empty()) {
    auto& derived = doc["derived"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.derived) derived[k] = cell_json(v);
  }
  auto& results = doc["results"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json item;
    for (std::size_t i = 0; i < row.size(); ++i) item[r.columns[i]] = cell_json(row[i]);
    results.push_back(std::move(item));
  }
  doc["seed"] = r.seed;
  doc["version"] = kVersion;
  os << doc.dump(2) << '\n';
}

// "lo:hi:count" (inclusive linspace), "a,b,c", or a single value.
std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw domain_error("cannot parse grid value '" + s + "' in '" + text + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw domain_error("grid '" + text + "' must read lo:hi:count");
    const double lo = number(parts[0]);
    const double hi = number(parts[1]);
    const double count = number(parts[2]);
    if (count < 1 || count != std::floor(count)) throw domain_error("grid count must be a positive integer");
    const int k = static_cast<int>(count);
    if (k == 1) return {lo};
    for (int i = 0; i < k; ++i) out.push_back(lo + (hi - lo) * i / (k - 1));
    return out;
  }
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  if (out.empty()) throw domain_error("empty grid");
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("EQC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw domain_error(std::string("EQC_SEED is not an unsigned integer: ") + env);
    }
  }
  return 20240611;
}

std::uint64_t command_tag(const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ULL;
  return h;
}

struct Common {
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::string out = "-";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, Common& c, std::int64_t default_trials) {
  c.trials = default_trials;
  cmd->add_option("--seed", c.seed, "master seed (default: $EQC_SEED or built-in)");
  cmd->add_option("--trials", c.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "output path, '-' for stdout");
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

MultiplierConvention parse_multiplier(const std::string& s) {
  if (s == "m+1") return MultiplierConvention::m_plus_one;
  if (s == "m") return MultiplierConvention::m;
  throw domain_error("--multiplier must be 'm+1' or 'm'");
}

EigenIndex parse_index(const std::string& s) {
  if (s == "m+1") return EigenIndex::m_plus_one;
  if (s == "m") return EigenIndex::m;
  throw domain_error("--index must be 'm+1' or 'm'");
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void emit(const Report& r, const Common& c, std::ostream& out, const std::string& command_line) {
  std::ostringstream body;
  if (c.format == "json")
    write_json(r, body);
  else
    write_csv(r, body);
  if (c.out == "-") {
    out << body.str();
    return;
  }
  {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw io_failure("cannot open " + c.out + " for writing");
    f << body.str();
    if (!f) throw io_failure("write to " + c.out + " failed");
  }
  std::ofstream log(c.out + ".log");
  if (!log) throw io_failure("cannot open " + c.out + ".log for writing");
  log << "timestamp=" << iso_timestamp() << '\n' << "command=" << command_line << '\n';
}

void echo_tau_b(Report& r, const TauB& tb) {
  r.derived.emplace_back("tau", tb.tau);
  r.derived.emplace_back("b", tb.b);
  r.derived.emplace_back("b2", tb.b * tb.b);
}

// ---- commands ----

Report cmd_rates(const std::string& b_grid, const std::string& tau_grid, const std::string& gamma_grid, int m) {
  Report r;
  r.op = "rates";
  r.params = {{"b", b_grid}, {"tau", tau_grid}, {"gamma", gamma_grid.empty() ? std::string("none") : gamma_grid},
              {"m", static_cast<std::int64_t>(m)}};
  r.columns = {"b", "tau", "gamma_or_c", "branch", "rate"};
  const auto bs = parse_grid(b_grid);
  const auto taus = parse_grid(tau_grid);
  const auto gammas = gamma_grid.empty() ? std::vector<double>{} : parse_grid(gamma_grid);
  for (double b : bs)
    for (double tau : taus) {
      if (gammas.empty()) {
        const auto res = rate_fixed_m(b, tau);
        r.row({b, tau, std::string(""), std::string(to_string(res.branch)), res.rate});
      }
      for (double g : gammas) {
        const auto res = rate_diverging(b, tau, g);
        r.row({b, tau, g, std::string(to_string(res.branch)), res.rate});
      }
    }
  return r;
}

Report cmd_lagrange_rates(const std::string& b_grid, const std::string& tau_grid, double dphi1, int m,
                          const std::string& c_grid, const std::string& d_text, const std::string& multiplier,
                          std::ostream& err) {
  Report r;
  r.op = "lagrange-rates";
  r.params = {{"b", b_grid},   {"tau", tau_grid}, {"dphi1", dphi1}, {"m", static_cast<std::int64_t>(m)},
              {"c", c_grid},   {"d", d_text},     {"multiplier", multiplier}};
  r.columns = {"b", "tau", "gamma_or_c", "branch", "rate"};
  const auto conv = parse_multiplier(multiplier);
  const ExtendedReal d = ExtendedReal::parse(d_text);
  for (double b : parse_grid(b_grid))
    for (double tau : parse_grid(tau_grid))
      for (double c : parse_grid(c_grid)) {
        const auto res = rate_lagrange(b, tau, dphi1, m, ExtendedReal::finite(c), d, conv);
        if (res.boundary_warning)
          err << "warning: interval endpoint on the spectral edge at b=" << format_double(b)
              << " tau=" << format_double(tau) << " c=" << format_double(c) << "; resolved by continuity\n";
        r.row({b, tau, c, std::string(to_string(res.branch)), res.rate});
      }
  return r;
}

Report cmd_threshold_curve(const std::string& b_grid) {
  Report r;
  r.op = "threshold-curve";
  r.params = {{"b_grid", b_grid}};
  r.columns = {"b", "tau_threshold", "rate_at_threshold"};
  for (double b : parse_grid(b_grid)) {
    const double tau = threshold_tau(b);
    r.row({b, tau, rate_fixed_m(b, tau).rate});
  }
  return r;
}

Report cmd_s_gamma(const std::string& gamma_grid, const std::string& tau_grid) {
  Report r;
  r.op = "s-gamma";
  r.params = {{"gamma", gamma_grid}, {"tau", tau_grid}};
  r.columns = {"gamma", "tau", "s_gamma", "tail_mass"};
  for (double g : parse_grid(gamma_grid))
    for (double tau : parse_grid(tau_grid)) {
      const double s = s_gamma(g, tau);
      r.row({g, tau, s, tail_mass(s, tau)});
    }
  return r;
}

Report cmd_sample_gee(int n, double tau, const Common& c) {
  Report r;
  r.op = "sample-gee";
  r.seed = c.seed;
  r.params = {{"n", static_cast<std::int64_t>(n)}, {"tau", tau}, {"trials", c.trials}};
  r.columns = {"trial_index", "j", "re", "im", "is_real"};
  const std::uint64_t s = stream_seed(c.seed, command_tag(r.op));
  const auto spectra = run_trials(c.trials, [&](std::int64_t i) {
    Rng rng = substream(s, static_cast<std::uint64_t>(i));
    return spectrum(sample_gee(n, tau, rng), static_cast<std::uint64_t>(i));
  });
  for (std::size_t i = 0; i < spectra.size(); ++i)
    for (std::size_t j = 0; j < spectra[i].eigenvalues.size(); ++j) {
      const auto& e = spectra[i].eigenvalues[j];
      r.row({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j + 1), e.value.real(), e.value.imag(), e.is_real});
    }
  return r;
}

Report cmd_spectral_test(int n, double tau, const Common& c) {
  Report r;
  r.op = "spectral-test";
  r.seed = c.seed;
  r.params = {{"n", static_cast<std::int64_t>(n)}, {"tau", tau}, {"trials", c.trials}};
  r.columns = {"n", "tau", "ks_distance"};
  r.row({static_cast<std::int64_t>(n), tau,
         empirical_spectral_test(n, tau, c.trials, stream_seed(c.seed, command_tag(r.op)))});
  return r;
}

IntervalB parse_interval(const std::string& lo, const std::string& hi) {
  return IntervalB(ExtendedReal::parse(lo), ExtendedReal::parse(hi));
}

Report cmd_estimate(int n, int m, const ModelParams& p, const std::string& lo, const std::string& hi,
                    const std::string& index, const Common& c) {
  Report r;
  r.op = "estimate";
  r.seed = c.seed;
  r.params = {{"n", static_cast<std::int64_t>(n)}, {"m", static_cast<std::int64_t>(m)}, {"phi1", p.phi1},
              {"dphi1", p.dphi1}, {"phi2", p.phi2}, {"sigma2", p.sigma2}, {"B_lo", lo}, {"B_hi", hi},
              {"index", index}, {"trials", c.trials}};
  echo_tau_b(r, derive_tau_b(p));
  r.columns = {"m", "mean", "stderr", "n_trials"};
  const auto e = estimate_EN_m(n, m, p, parse_interval(lo, hi), c.trials, stream_seed(c.seed, command_tag(r.op)),
                               parse_index(index));
  r.row({static_cast<std::int64_t>(m), e.mean, e.std_error, e.n_trials});
  return r;
}

Report cmd_verify_uppingdim(int n, int m, double tau, const std::string& lo, const std::string& hi,
                            const Common& c) {
  Report r;
  r.op = "verify-uppingdim";
  r.seed = c.seed;
  r.params = {{"n", static_cast<std::int64_t>(n)}, {"m", static_cast<std::int64_t>(m)}, {"tau", tau},
              {"f_lo", lo}, {"f_hi", hi}, {"trials", c.trials}};
  r.columns = {"lhs", "lhs_stderr", "rhs", "rhs_stderr", "z_score", "panels"};
  const auto rep = verify_uppingdim(n, m, tau, parse_interval(lo, hi), QuadratureSpec{}, c.trials,
                                    stream_seed(c.seed, command_tag(r.op)));
  r.row({rep.lhs.mean, rep.lhs.std_error, rep.rhs.mean, rep.rhs.std_error, rep.z_score,
         static_cast<std::int64_t>(rep.panels)});
  return r;
}

Report cmd_oracle_compare(int n, double sigma2, std::int64_t mc_trials, const std::string& dump, const Common& c,
                          double& worst_z) {
  Report r;
  r.op = "oracle-compare";
  r.seed = c.seed;
  r.params = {{"n", static_cast<std::int64_t>(n)}, {"sigma2", sigma2}, {"trials", c.trials},
              {"mc_trials", mc_trials}};
  if (n != 2 && n != 3) throw domain_error("oracle-compare: --n must be 2 or 3");
  FieldSample probe;
  probe.sigma2 = sigma2;
  const ModelParams p = probe.model_params();
  echo_tau_b(r, derive_tau_b(p));

  const std::uint64_t oracle_seed = stream_seed(stream_seed(c.seed, command_tag(r.op)), 1);
  const std::uint64_t mc_seed = stream_seed(stream_seed(c.seed, command_tag(r.op)), 2);
  const auto results = run_trials(c.trials, [&](std::int64_t i) {
    Rng rng = substream(oracle_seed, static_cast<std::uint64_t>(i));
    const FieldSample fs = sample_field(n, sigma2, rng);
    return n == 2 ? find_equilibria_circle(fs) : find_equilibria_sphere2(fs);
  });

  std::vector<std::vector<double>> counts(static_cast<std::size_t>(n + 1));
  std::int64_t flagged = 0;
  for (const auto& res : results) {
    if (res.flagged) {
      ++flagged;
      continue;
    }
    double total = 0.0;
    for (int m = 0; m < n; ++m) {
      counts[static_cast<std::size_t>(m)].push_back(res.count(m));
      total += res.count(m);
    }
    counts[static_cast<std::size_t>(n)].push_back(total);
  }
  if (flagged == c.trials) throw std::runtime_error("oracle-compare: every field sample was flagged");
  r.derived.emplace_back("flagged_samples", flagged);
  r.derived.emplace_back("flagged_rate", static_cast<double>(flagged) / static_cast<double>(c.trials));

  r.columns = {"m", "oracle_mean", "oracle_stderr", "estimate_mean", "estimate_stderr", "z_score"};
  std::vector<double> total(static_cast<std::size_t>(mc_trials), 0.0);
  worst_z = 0.0;
  for (int m = 0; m <= n; ++m) {
    const auto o = summarize(counts[static_cast<std::size_t>(m)], oracle_seed);
    MCEstimate e;
    if (m < n) {
      const auto v = en_m_trial_values(n, m, p, IntervalB::whole_line(), mc_trials, mc_seed);
      for (std::size_t i = 0; i < v.size(); ++i) total[i] += v[i];
      e = summarize(v, mc_seed);
    } else {
      e = summarize(total, mc_seed);
    }
    const double z = z_score(o, e);
    worst_z = std::max(worst_z, z);
    r.row({m < n ? Cell(static_cast<std::int64_t>(m)) : Cell(std::string("total")), o.mean, o.std_error, e.mean,
           e.std_error, z});
  }

  if (!dump.empty()) {
    std::ofstream f(dump);
    if (!f) throw io_failure("cannot open " + dump + " for writing");
    f << "sample_index,eq_index,m,lagrange";
    for (int k = 0; k < n; ++k) f << ",x" << k;
    f << ",residual\n";
    for (std::size_t i = 0; i < results.size(); ++i)
      for (std::size_t j = 0; j < results[i].equilibria.size(); ++j) {
        const auto& e = results[i].equilibria[j];
        f << i << ',' << j << ',' << e.m << ',' << format_double(e.lagrange);
        for (int k = 0; k < n; ++k) f << ',' << format_double(e.position(k));
        f << ',' << format_double(e.residual) << '\n';
      }
    if (!f) throw io_failure("write to " + dump + " failed");
  }
  return r;
}

Report cmd_ldp_tail(const std::string& n_grid, int m, double x, double tau, const Common& c) {
  Report r;
  r.op = "ldp-tail";
  r.seed = c.seed;
  r.params = {{"n_list", n_grid}, {"m", static_cast<std::int64_t>(m)}, {"x", x}, {"tau", tau}, {"trials", c.trials}};
  r.columns = {"n", "hits", "probability", "stderr", "rate_hat", "reference", "insufficient_hits"};
  std::vector<int> ns;
  for (double v : parse_grid(n_grid)) {
    if (v != std::floor(v) || v < 1) throw domain_error("ldp-tail: --n-list entries must be positive integers");
    ns.push_back(static_cast<int>(v));
  }
  for (const auto& row : empirical_tail_rate(ns, m, x, tau, c.trials, stream_seed(c.seed, command_tag(r.op))))
    r.row({static_cast<std::int64_t>(row.n), row.hits, row.probability.mean, row.probability.std_error, row.rate_hat,
           row.reference, row.insufficient_hits});
  return r;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complexity rates and finite-dimensional checks for random Gaussian vector fields on spheres", "eqc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  std::string b_grid = "0.5", tau_grid = "0", gamma_grid, c_grid = "0", d_text = "inf", multiplier = "m+1";
  std::string index = "m+1", lo = "-inf", hi = "inf", f_lo = "1", f_hi = "1.4", n_grid = "10,20,40", dump;
  int n = 2, m = 0;
  double tau = 0.0, dphi1 = 2.0, x = 1.3, sigma2 = 0.25;
  std::int64_t mc_trials = 100000;
  ModelParams params;

  auto* rates = app.add_subcommand("rates", "fixed-m and diverging-m rate table");
  rates->add_option("--b", b_grid, "b grid");
  rates->add_option("--tau", tau_grid, "tau grid");
  rates->add_option("--gamma", gamma_grid, "gamma grid (omit for fixed m)");
  rates->add_option("--m", m, "unstable-direction count")->check(CLI::NonNegativeNumber);
  add_common(rates, common, 1);

  auto* lag = app.add_subcommand("lagrange-rates", "rates with the Lagrange multiplier in (c, d)");
  lag->add_option("--b", b_grid, "b grid");
  lag->add_option("--tau", tau_grid, "tau grid");
  lag->add_option("--dphi1", dphi1, "Phi_1'(1)");
  lag->add_option("--m", m, "unstable-direction count")->check(CLI::NonNegativeNumber);
  lag->add_option("--c", c_grid, "lower multiplier bound grid");
  lag->add_option("--d", d_text, "upper multiplier bound (inf allowed)");
  lag->add_option("--multiplier", multiplier, "m+1 or m");
  add_common(lag, common, 1);

  auto* thr = app.add_subcommand("threshold-curve", "tau(b) where the fixed-m rate vanishes");
  thr->add_option("--b-grid", b_grid, "b grid")->required();
  add_common(thr, common, 1);

  auto* sg = app.add_subcommand("s-gamma", "quantile s_gamma of the elliptic law's real marginal");
  sg->add_option("--gamma", gamma_grid, "gamma grid")->required();
  sg->add_option("--tau", tau_grid, "tau grid");
  add_common(sg, common, 1);

  auto* sample = app.add_subcommand("sample-gee", "ordered spectra of ensemble draws");
  sample->add_option("--n", n, "matrix size")->check(CLI::PositiveNumber);
  sample->add_option("--tau", tau, "ensemble parameter");
  add_common(sample, common, 1);

  auto* spec = app.add_subcommand("spectral-test", "Kolmogorov distance to the elliptic law");
  spec->add_option("--n", n, "matrix size")->check(CLI::PositiveNumber);
  spec->add_option("--tau", tau, "ensemble parameter");
  add_common(spec, common, 50);

  auto* est = app.add_subcommand("estimate", "expected equilibrium count with m unstable directions");
  est->add_option("--n", n, "dimension")->check(CLI::PositiveNumber);
  est->add_option("--m", m, "unstable-direction count")->check(CLI::NonNegativeNumber);
  est->add_option("--phi1", params.phi1, "Phi_1(1)");
  est->add_option("--dphi1", params.dphi1, "Phi_1'(1)");
  est->add_option("--phi2", params.phi2, "Phi_2(1)");
  est->add_option("--sigma2", params.sigma2, "variance of h");
  est->add_option("--B-lo", lo, "lower end of B");
  est->add_option("--B-hi", hi, "upper end of B");
  est->add_option("--index", index, "m+1 or m");
  add_common(est, common, 100000);

  auto* up = app.add_subcommand("verify-uppingdim", "check the dimension-raising identity");
  up->add_option("--n", n, "dimension")->check(CLI::PositiveNumber);
  up->add_option("--m", m, "unstable-direction count")->check(CLI::PositiveNumber);
  up->add_option("--tau", tau, "ensemble parameter");
  up->add_option("--f-lo", f_lo, "lower end of the indicator f");
  up->add_option("--f-hi", f_hi, "upper end of the indicator f");
  add_common(up, common, 100000);

  auto* oracle = app.add_subcommand("oracle-compare", "direct equilibrium counts vs the estimator");
  oracle->add_option("--n", n, "2 or 3");
  oracle->add_option("--sigma2", sigma2, "variance of h");
  oracle->add_option("--mc-trials", mc_trials, "estimator trials")->check(CLI::PositiveNumber);
  oracle->add_option("--dump", dump, "equilibrium CSV dump path");
  add_common(oracle, common, 10000);

  auto* ldp = app.add_subcommand("ldp-tail", "empirical tail rate of the m-th eigenvalue");
  ldp->add_option("--n-list", n_grid, "dimensions");
  ldp->add_option("--m", m, "eigenvalue rank")->check(CLI::PositiveNumber);
  ldp->add_option("--x", x, "threshold beyond the edge");
  ldp->add_option("--tau", tau, "ensemble parameter");
  add_common(ldp, common, 100000);

  std::string command_line;
  for (int i = 0; i < argc; ++i) command_line += (i ? " " : "") + std::string(argv[i]);

  try {
    common.seed = default_seed();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }

  try {
    Report report;
    double worst_z = 0.0;
    bool gated = false;
    if (rates->parsed()) {
      report = cmd_rates(b_grid, tau_grid, gamma_grid, m);
    } else if (lag->parsed()) {
      report = cmd_lagrange_rates(b_grid, tau_grid, dphi1, m, c_grid, d_text, multiplier, err);
    } else if (thr->parsed()) {
      report = cmd_threshold_curve(b_grid);
    } else if (sg->parsed()) {
      report = cmd_s_gamma(gamma_grid, tau_grid);
    } else if (sample->parsed()) {
      report = cmd_sample_gee(n, tau, common);
    } else if (spec->parsed()) {
      report = cmd_spectral_test(n, tau, common);
    } else if (est->parsed()) {
      report = cmd_estimate(n, m, params, lo, hi, index, common);
    } else if (up->parsed()) {
      report = cmd_verify_uppingdim(n, m, tau, f_lo, f_hi, common);
      worst_z = std::get<double>(report.rows.front()[4]);
      gated = true;
    } else if (oracle->parsed()) {
      report = cmd_oracle_compare(n, sigma2, mc_trials, dump, common, worst_z);
      gated = true;
    } else if (ldp->parsed()) {
      report = cmd_ldp_tail(n_grid, m, x, tau, common);
    }
    report.seed = common.seed;
    emit(report, common, out, command_line);
    if (gated && !(worst_z < 3.0)) {
      err << "statistical gate failed: z_score " << format_double(worst_z) << " >= 3\n";
      return kGateFailed;
    }
    return kOk;
  } catch (const constraint_error& e) {
    err << "constraint violated (" << e.constraint() << "): " << e.what() << '\n';
    return kBadInput;
  } catch (const io_failure& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace eqc::cli
