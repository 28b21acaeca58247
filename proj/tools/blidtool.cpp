// Command-line driver: runs verification suites and writes JSON/CSV reports.
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "blidkit/suite.hpp"

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
  // extend
  std::optional<std::string> germ, blid, input, output;
  // cohomology
  std::optional<std::string> matrix, jets;
  std::optional<int> order;
  // linearize-cutoff
  std::optional<std::string> map;
  std::optional<double> delta, alpha, epsilon;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config_path, "JSON configuration file");
  app->add_option("--seed", o.seed, "Random seed");
  app->add_option("--out", o.out, "Output directory");
  app->add_option("--workers", o.workers, "Worker threads");
}

int run(const std::string& suite, const Options& o) {
  blidkit::SuiteConfig config;
  try {
    if (!o.config_path.empty()) config = blidkit::load_config(o.config_path);
    config.suite = suite;
    if (o.seed) config.seed = *o.seed;
    if (o.out) config.output_dir = *o.out;
    if (o.workers) config.workers = *o.workers;
    if (o.germ) config.extension.germ = *o.germ;
    if (o.blid) config.extension.blid = *o.blid;
    if (o.input) config.extension.input = *o.input;
    if (o.output) config.extension.output = *o.output;
    if (o.matrix) config.cohomology.matrix = *o.matrix;
    if (o.jets) config.cohomology.jets = *o.jets;
    if (o.order) config.cohomology.order = *o.order;
    if (o.map) config.linearization.maps = {*o.map};
    if (o.delta) config.linearization.delta = *o.delta;
    if (o.alpha) config.linearization.alpha = *o.alpha;
    if (o.epsilon) config.linearization.epsilon = *o.epsilon;
    blidkit::validate(config);
  } catch (const blidkit::ConfigError& e) {
    std::cerr << "config error at " << e.key_path() << ": " << e.what() << "\n";
    return 2;
  }

  const blidkit::Report report = blidkit::run_suite(config);
  try {
    for (const auto& p : blidkit::write_report(report, config.output_dir)) std::cout << "wrote " << p.string() << "\n";
    blidkit::emit_plotdata(report, config.output_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  int failed = 0;
  for (const auto& c : report.cases) {
    const bool ok = c.pass && !c.error;
    if (!ok) ++failed;
    std::cout << (ok ? "PASS " : "FAIL ") << c.case_id;
    if (c.error) std::cout << "  (" << *c.error << ")";
    std::cout << "\n";
  }
  std::cout << report.cases.size() - failed << "/" << report.cases.size() << " cases passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blidtool: numerical checks for bounded local identity maps"};
  app.require_subcommand(1);
  Options o;

  add_common(app.add_subcommand("verify-blid", "Identity, seminorm bound, containment and differentiability of blids"), o);
  add_common(app.add_subcommand("borel", "Borel realization of jet sequences"), o);
  add_common(app.add_subcommand("all", "Every suite"), o);

  auto* extend = app.add_subcommand("extend", "Extend a germ with a blid; optionally evaluate an element");
  add_common(extend, o);
  extend->add_option("--germ", o.germ, "Germ catalog name");
  extend->add_option("--blid", o.blid, "Blid kind");
  extend->add_option("--input", o.input, "Element JSON to evaluate");
  extend->add_option("--output", o.output, "Where to write the value JSON");

  auto* coh = app.add_subcommand("cohomology", "Cohomological equation checks");
  add_common(coh, o);
  coh->add_option("--matrix", o.matrix, "Matrix A as JSON rows");
  coh->add_option("--jets", o.jets, "Jet sequence of f as JSON");
  coh->add_option("--order", o.order, "Truncation order m");

  auto* lin = app.add_subcommand("linearize-cutoff", "Cutoff checks for a catalog map");
  add_common(lin, o);
  lin->add_option("--map", o.map, "Catalog map name");
  lin->add_option("--delta", o.delta, "Cutoff scale");
  lin->add_option("--alpha", o.alpha, "Hoelder exponent");
  lin->add_option("--epsilon", o.epsilon, "Small/large split");

  CLI11_PARSE(app, argc, argv);
  return run(app.get_subcommands().front()->get_name(), o);
}
