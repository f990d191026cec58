#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eqc/cli.hpp"

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "eqc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = eqc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Data lines of a CSV artifact: comment lines dropped, header first.
std::vector<std::string> data_lines(const std::string& csv) {
  std::vector<std::string> lines;
  std::istringstream is(csv);
  for (std::string line; std::getline(is, line);)
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("rates row") {
  const auto r = run({"rates", "--b", "0.5", "--tau", "0", "--m", "1"});
  CHECK(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "b,tau,gamma_or_c,branch,rate");
  const auto cells = split(lines[1]);
  REQUIRE(cells.size() == 5);
  CHECK(std::stod(cells[4]) == doctest::Approx(std::log(2.0) - 1.5).epsilon(1e-12));
  CHECK(r.out.find("# b=0.5") != std::string::npos);
}

TEST_CASE("rate table with a gamma column") {
  const auto r = run({"rates", "--b", "0.3,0.6", "--tau", "0.1", "--gamma", "0.5"});
  CHECK(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 3);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split(lines[i]);
    CHECK(cells[3] == "diverging");
    CHECK(std::stod(cells[4]) == -std::log(std::stod(cells[0])));
  }
}

TEST_CASE("threshold curve") {
  const auto r = run({"threshold-curve", "--b-grid", "0.05:0.95:100"});
  CHECK(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 101);
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(std::abs(std::stod(split(lines[i])[2])) < 1e-12);
}

TEST_CASE("negative infinity is a literal in CSV and tagged in JSON") {
  const auto csv = run({"lagrange-rates", "--b", "0.5", "--tau", "0", "--dphi1", "2", "--c", "-3", "--d", "1"});
  CHECK(csv.code == 0);
  const auto lines = data_lines(csv.out);
  REQUIRE(lines.size() == 2);
  CHECK(split(lines[1])[4] == "-inf");
  CHECK(split(lines[1])[3] == "lagrange_below");
  const auto js = run({"lagrange-rates", "--c", "-3", "--d", "1", "--format", "json"});
  CHECK(js.code == 0);
  const auto doc = nlohmann::json::parse(js.out);
  CHECK(doc["results"][0]["rate"]["extended"] == "-inf");
}

TEST_CASE("edge endpoint warns") {
  const auto r = run({"lagrange-rates", "--b", "0.5", "--tau", "0", "--dphi1", "1", "--c", "1", "--d", "inf"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("JSON schema") {
  const auto r = run({"estimate", "--n", "3", "--m", "0", "--sigma2", "0.25", "--trials", "500", "--seed", "9",
                      "--format", "json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  for (const char* key : {"op", "params", "results", "seed", "version"}) CHECK(doc.contains(key));
  CHECK(doc["op"] == "estimate");
  CHECK(doc["seed"] == 9);
  CHECK(doc["derived"]["tau"] == 0.0);
  CHECK(doc["derived"]["b2"].get<double>() == doctest::Approx(0.625));
  CHECK(doc["results"][0]["n_trials"] == 500);
}

TEST_CASE("constraint violations exit 2 and name the inequality") {
  const auto r = run({"estimate", "--phi1", "1", "--dphi1", "2", "--phi2", "2.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("-phi1 <= phi2 <= phi1") != std::string::npos);
  CHECK(run({"rates", "--b", "1.5"}).code == 2);
  CHECK(run({"rates", "--b", "abc"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"rates", "--format", "xml"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("unwritable output exits 4") {
  const auto r = run({"rates", "--out", "/nonexistent-dir/x.csv"});
  CHECK(r.code == 4);
}

TEST_CASE("file output, sidecar log and byte-identical reruns") {
  const auto dir = std::filesystem::temp_directory_path() / "eqc_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.csv", b = dir / "b.csv";
  CHECK(run({"sample-gee", "--n", "4", "--tau", "0.3", "--trials", "5", "--seed", "3", "--out", a.string()}).code == 0);
  CHECK(run({"sample-gee", "--n", "4", "--tau", "0.3", "--trials", "5", "--seed", "3", "--out", b.string()}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(std::filesystem::exists(a.string() + ".log"));
  CHECK(slurp(a.string() + ".log").find("timestamp=") != std::string::npos);
  const auto lines = data_lines(slurp(a));
  CHECK(lines[0] == "trial_index,j,re,im,is_real");
  CHECK(lines.size() == 21);
  std::filesystem::remove_all(dir);
}

TEST_CASE("seed from the environment") {
  setenv("EQC_SEED", "12345", 1);
  const auto r = run({"sample-gee", "--n", "2", "--trials", "1"});
  unsetenv("EQC_SEED");
  CHECK(r.out.find("# seed=12345") != std::string::npos);
  const auto explicit_seed = run({"sample-gee", "--n", "2", "--trials", "1", "--seed", "12345"});
  CHECK(explicit_seed.out == r.out);
  setenv("EQC_SEED", "not-a-number", 1);
  CHECK(run({"rates"}).code == 2);
  unsetenv("EQC_SEED");
}

TEST_CASE("verification commands report z and gate") {
  const auto r = run({"verify-uppingdim", "--n", "3", "--m", "1", "--tau", "0.3", "--trials", "20000", "--seed", "7",
                      "--format", "json"});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["results"][0]["z_score"].get<double>() < 3.0);

  const auto dir = std::filesystem::temp_directory_path() / "eqc_cli_oracle";
  std::filesystem::create_directories(dir);
  const auto dump = dir / "eq.csv";
  const auto o = run({"oracle-compare", "--n", "2", "--trials", "300", "--mc-trials", "20000", "--seed", "4",
                      "--dump", dump.string()});
  CHECK((o.code == 0 || o.code == 3));
  const auto lines = data_lines(o.out);
  REQUIRE(lines.size() == 4);
  CHECK(split(lines[3])[0] == "total");
  const auto eq = data_lines(slurp(dump));
  CHECK(eq[0] == "sample_index,eq_index,m,lagrange,x0,x1,residual");
  CHECK(eq.size() > 300);
  std::filesystem::remove_all(dir);
}

TEST_CASE("tail, spectral and quantile commands") {
  const auto t = run({"ldp-tail", "--n-list", "6,8", "--m", "1", "--x", "1.3", "--trials", "500"});
  CHECK(t.code == 0);
  CHECK(data_lines(t.out).size() == 3);
  const auto s = run({"spectral-test", "--n", "60", "--trials", "3"});
  CHECK(s.code == 0);
  const auto q = run({"s-gamma", "--gamma", "0.5", "--tau", "0.2"});
  CHECK(split(data_lines(q.out)[1])[2] == "0");
  CHECK(run({"ldp-tail", "--x", "0.5"}).code == 2);
}
