#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "blidkit/suite.hpp"

using namespace blidkit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("blidkit-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Case* find(const Report& r, const std::string& id) {
  for (const auto& c : r.cases)
    if (c.case_id == id) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("config validation names the key path") {
  try {
    config_from_json(nlohmann::json::parse(R"({"bump": {"r_inner": 0.6, "r_outer": 0.5}})"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "bump.r_inner");
  }
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"sweet": "all"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"suite": "nope"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"seed": -1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"linearization": {"alpha": 1.5}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"grid_points": "many"})")), ConfigError);
}

TEST_CASE("default config file matches built-in defaults") {
  const SuiteConfig file = load_config(fs::path(BLIDKIT_DATA_DIR) / "config" / "default.json");
  const SuiteConfig builtin;
  CHECK(config_hash(file) == config_hash(builtin));
  SuiteConfig other = builtin;
  other.seed = 7;
  CHECK(config_hash(other) != config_hash(builtin));
  other = builtin;
  other.workers = 4;
  CHECK(config_hash(other) == config_hash(builtin));
}

TEST_CASE("verify-blid suite passes with defaults") {
  SuiteConfig c;
  c.suite = "verify-blid";
  const Report r = run_suite(c);
  CHECK(r.pass());
  for (const char* id : {"verify-blid/identity/pointwise", "verify-blid/bound/k3", "verify-blid/containment/c0.5"})
    CHECK(find(r, id) != nullptr);
  CHECK(std::is_sorted(r.cases.begin(), r.cases.end(),
                       [](const Case& a, const Case& b) { return a.case_id < b.case_id; }));

  const fs::path dir = scratch("plots");
  emit_plotdata(r, dir);
  const std::string bounds = slurp(dir / "verify-blid-bounds.csv");
  CHECK(bounds.rfind("k,observed,bound\n", 0) == 0);
  std::istringstream rows(bounds);
  std::string line;
  std::getline(rows, line);
  int n = 0;
  while (std::getline(rows, line)) {
    double k, observed, bound;
    char comma;
    std::istringstream(line) >> k >> comma >> observed >> comma >> bound;
    CHECK(observed < bound);
    ++n;
  }
  CHECK(n == 4);

  std::istringstream series(slurp(dir / "verify-blid-series-verify-blid_diff_quadratic-1d.csv"));
  std::getline(series, line);
  CHECK(line == "log10_t,log10_ratio");
  double previous = 1e300;
  while (std::getline(series, line)) {
    const double y = std::stod(line.substr(line.find(',') + 1));
    CHECK(y <= previous);
    previous = y;
  }
}

TEST_CASE("empty report gives header-only CSV") {
  Report r;
  r.suite = "empty";
  const fs::path dir = scratch("empty");
  emit_plotdata(r, dir);
  CHECK(slurp(dir / "empty-bounds.csv") == "k,observed,bound\n");
  write_report(r, dir);
  CHECK(slurp(dir / "empty.csv") == "case_id,quantity,observed,bound,pass\n");
}

TEST_CASE("resonant fixture makes the cohomology suite fail") {
  const SuiteConfig c = load_config(fs::path(BLIDKIT_DATA_DIR) / "config" / "resonant.json");
  const Report r = run_suite(c);
  CHECK_FALSE(r.pass());
  const Case* fixture = find(r, "cohomology/fixture/coefficients");
  REQUIRE(fixture != nullptr);
  REQUIRE(fixture->error.has_value());
  CHECK(fixture->error->find("Unsolvable") != std::string::npos);
  const Case* detection = find(r, "cohomology/resonance/xy");
  REQUIRE(detection != nullptr);
  CHECK(detection->pass);
}

TEST_CASE("reports are deterministic across worker counts") {
  SuiteConfig c;
  c.suite = "linearize-cutoff";
  c.workers = 1;
  const std::string one = to_json(run_suite(c)).dump();
  c.workers = 2;
  const std::string two = to_json(run_suite(c)).dump();
  CHECK(one == two);
}

TEST_CASE("written report round-trips") {
  SuiteConfig c;
  c.suite = "cohomology";
  const Report r = run_suite(c);
  const fs::path dir = scratch("report");
  write_report(r, dir);
  const auto j = nlohmann::json::parse(slurp(dir / "cohomology.json"));
  CHECK(j.at("suite") == "cohomology");
  CHECK(j.at("metadata").at("seed") == 42);
  CHECK(j.at("metadata").at("config_hash") == config_hash(c));
  CHECK(j.at("cases").size() == r.cases.size());
  for (const auto& e : j.at("cases")) {
    CHECK(e.contains("observed"));
    CHECK(e.contains("bound"));
    CHECK(e.contains("pass"));
  }
}
