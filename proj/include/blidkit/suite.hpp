#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace blidkit {

inline constexpr const char* kVersion = "0.1.0";

/// Invalid configuration; key_path names the offending entry ("bump.r_inner").
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key_path, const std::string& message)
      : std::invalid_argument(key_path + ": " + message), key_path_(std::move(key_path)) {}
  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

struct SuiteConfig {
  std::string suite = "all";
  std::uint64_t seed = 42;
  int grid_points = 1025;
  int k_max = 40;
  double r_inner = 1.0 / 3.0;
  double r_outer = 0.5;
  std::map<std::string, double> tolerances = default_tolerances();
  std::string output_dir = "reports";
  int workers = 1;

  struct Extension {
    std::string germ = "example1";
    std::string blid = "pointwise";
    std::optional<std::string> input;   // element JSON evaluated by the extend suite
    std::optional<std::string> output;  // where the value is written
  } extension;

  struct Cohomology {
    std::optional<std::string> matrix;  // A as JSON rows
    std::optional<std::string> jets;    // jet sequence of f
    int order = 2;
  } cohomology;

  struct Linearization {
    std::vector<std::string> maps = {"quadratic-1d", "quadratic-2d"};
    double delta = 0.1;
    double delta_eta = 0.1;
    double alpha = 1.0;
    double epsilon = 0.5;
    int directions_per_shell = 50;
  } linearization;

  static std::map<std::string, double> default_tolerances();
  double tolerance(const std::string& name) const { return tolerances.at(name); }
};

inline const std::vector<std::string> kSuites = {"verify-blid", "extend", "borel", "cohomology", "linearize-cutoff",
                                                 "all"};

/// Parses and validates; missing keys keep their defaults, unknown keys are
/// rejected. Relative fixture paths resolve against base_dir.
SuiteConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
SuiteConfig load_config(const std::filesystem::path& path);
void validate(const SuiteConfig& config);
nlohmann::json to_json(const SuiteConfig& config);
/// FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const SuiteConfig& config);

struct Case {
  std::string case_id;
  std::string quantity;
  double observed = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::optional<nlohmann::json> witness;
  std::optional<std::string> error;
  nlohmann::json detail;  // full module report
  /// Plot series: (x, y) rows, e.g. (log10 t, log10 ratio).
  std::vector<std::pair<double, double>> series;
  std::optional<int> k;  // set for seminorm-bound cases
};

struct Report {
  std::string suite;
  std::vector<Case> cases;  // sorted by case_id
  std::uint64_t seed = 0;
  std::string config_hash;

  bool pass() const;
};

nlohmann::json to_json(const Report& r);

/// Runs every case of the configured suite on config.workers threads.
Report run_suite(const SuiteConfig& config);

/// Writes <dir>/<suite>.json and <dir>/<suite>.csv; returns the paths.
std::vector<std::filesystem::path> write_report(const Report& r, const std::filesystem::path& dir);

/// Writes <dir>/<suite>-bounds.csv (k, observed, bound) and one
/// <dir>/<suite>-series-<case>.csv per case carrying a series.
std::vector<std::filesystem::path> emit_plotdata(const Report& r, const std::filesystem::path& dir);

}  // namespace blidkit
