#include "blidkit/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "blidkit/blid.hpp"
#include "blidkit/bump.hpp"
#include "blidkit/cohomology.hpp"
#include "blidkit/differentiability.hpp"
#include "blidkit/extension.hpp"
#include "blidkit/jets.hpp"
#include "blidkit/linearization.hpp"
#include "blidkit/sampling.hpp"

namespace blidkit {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- config

std::map<std::string, double> SuiteConfig::default_tolerances() {
  return {{"identity", 1e-12},       {"agreement", 1e-10},      {"closed_form", 1e-8},
          {"coefficient", 1e-12},    {"eigenvalue_law", 1e-6},  {"diff_slope", 0.9},
          {"remainder", 1e-3},       {"borel_margin", 0.1}};
}

namespace {

const std::set<std::string> kRealGerms = {"example1", "constant", "mean-square"};
const std::set<std::string> kComplexGerms = {"complex-phase"};
const std::set<std::string> kBlidKinds = {"pointwise", "taylor-integral", "scaled"};
const std::set<std::string> kMaps = {"quadratic-1d", "quadratic-2d"};

void reject_unknown(const json& j, const std::string& prefix, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(prefix.empty() ? "<root>" : prefix, "expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(prefix.empty() ? key : prefix + "." + key, "unknown key");
}

template <class T>
void read(const json& j, const std::string& key, const std::string& path, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path, "wrong type");
  }
}

std::string resolve(const std::string& p, const fs::path& base) {
  const fs::path path(p);
  if (path.is_absolute() || base.empty()) return p;
  return (base / path).string();
}

}  // namespace

SuiteConfig config_from_json(const json& j, const fs::path& base_dir) {
  SuiteConfig c;
  reject_unknown(j, "", {"suite", "seed", "grid_points", "k_max", "bump", "tolerances", "output_dir", "workers",
                         "extension", "cohomology", "linearization"});
  read(j, "suite", "suite", c.suite);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() || j.at("seed").get<long long>() < 0)
      throw ConfigError("seed", "must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  read(j, "grid_points", "grid_points", c.grid_points);
  read(j, "k_max", "k_max", c.k_max);
  read(j, "output_dir", "output_dir", c.output_dir);
  read(j, "workers", "workers", c.workers);
  if (j.contains("bump")) {
    const json& b = j.at("bump");
    reject_unknown(b, "bump", {"r_inner", "r_outer"});
    read(b, "r_inner", "bump.r_inner", c.r_inner);
    read(b, "r_outer", "bump.r_outer", c.r_outer);
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances", "expected an object");
    for (const auto& [key, value] : t.items()) {
      if (!c.tolerances.count(key)) throw ConfigError("tolerances." + key, "unknown tolerance");
      if (!value.is_number()) throw ConfigError("tolerances." + key, "wrong type");
      c.tolerances[key] = value.get<double>();
    }
  }
  if (j.contains("extension")) {
    const json& e = j.at("extension");
    reject_unknown(e, "extension", {"germ", "blid", "input", "output"});
    read(e, "germ", "extension.germ", c.extension.germ);
    read(e, "blid", "extension.blid", c.extension.blid);
    if (e.contains("input")) c.extension.input = resolve(e.at("input").get<std::string>(), base_dir);
    if (e.contains("output")) c.extension.output = e.at("output").get<std::string>();
  }
  if (j.contains("cohomology")) {
    const json& h = j.at("cohomology");
    reject_unknown(h, "cohomology", {"matrix", "jets", "order"});
    if (h.contains("matrix")) c.cohomology.matrix = resolve(h.at("matrix").get<std::string>(), base_dir);
    if (h.contains("jets")) c.cohomology.jets = resolve(h.at("jets").get<std::string>(), base_dir);
    read(h, "order", "cohomology.order", c.cohomology.order);
  }
  if (j.contains("linearization")) {
    const json& l = j.at("linearization");
    reject_unknown(l, "linearization", {"maps", "delta", "delta_eta", "alpha", "epsilon", "directions_per_shell"});
    read(l, "maps", "linearization.maps", c.linearization.maps);
    read(l, "delta", "linearization.delta", c.linearization.delta);
    read(l, "delta_eta", "linearization.delta_eta", c.linearization.delta_eta);
    read(l, "alpha", "linearization.alpha", c.linearization.alpha);
    read(l, "epsilon", "linearization.epsilon", c.linearization.epsilon);
    read(l, "directions_per_shell", "linearization.directions_per_shell", c.linearization.directions_per_shell);
  }
  validate(c);
  return c;
}

SuiteConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("parse error: ") + e.what());
  }
  return config_from_json(j, path.parent_path());
}

void validate(const SuiteConfig& c) {
  if (std::find(kSuites.begin(), kSuites.end(), c.suite) == kSuites.end())
    throw ConfigError("suite", "unknown suite '" + c.suite + "'");
  if (c.grid_points < 5) throw ConfigError("grid_points", "must be at least 5");
  if (c.k_max < 1 || c.k_max > 60) throw ConfigError("k_max", "must lie in [1, 60]");
  if (!(c.r_inner > 0.0)) throw ConfigError("bump.r_inner", "must be positive");
  if (!(c.r_inner < c.r_outer)) throw ConfigError("bump.r_inner", "must be smaller than bump.r_outer");
  if (!std::isfinite(c.r_outer)) throw ConfigError("bump.r_outer", "must be finite");
  for (const auto& [key, value] : c.tolerances)
    if (!(value > 0.0)) throw ConfigError("tolerances." + key, "must be positive");
  if (c.workers < 1) throw ConfigError("workers", "must be at least 1");
  if (!kRealGerms.count(c.extension.germ) && !kComplexGerms.count(c.extension.germ))
    throw ConfigError("extension.germ", "unknown germ '" + c.extension.germ + "'");
  if (!kBlidKinds.count(c.extension.blid))
    throw ConfigError("extension.blid", "unknown blid kind '" + c.extension.blid + "'");
  if (c.cohomology.matrix.has_value() != c.cohomology.jets.has_value())
    throw ConfigError(c.cohomology.matrix ? "cohomology.jets" : "cohomology.matrix",
                      "matrix and jets must be given together");
  if (c.cohomology.order < 1) throw ConfigError("cohomology.order", "must be at least 1");
  if (c.linearization.maps.empty()) throw ConfigError("linearization.maps", "must not be empty");
  for (const auto& m : c.linearization.maps)
    if (!kMaps.count(m)) throw ConfigError("linearization.maps", "unknown map '" + m + "'");
  if (!(c.linearization.delta > 0.0)) throw ConfigError("linearization.delta", "must be positive");
  if (!(c.linearization.delta_eta > 0.0)) throw ConfigError("linearization.delta_eta", "must be positive");
  if (!(c.linearization.alpha > 0.0 && c.linearization.alpha <= 1.0))
    throw ConfigError("linearization.alpha", "must lie in (0, 1]");
  if (!(c.linearization.epsilon > 0.0)) throw ConfigError("linearization.epsilon", "must be positive");
  if (c.linearization.directions_per_shell < 1)
    throw ConfigError("linearization.directions_per_shell", "must be at least 1");
}

json to_json(const SuiteConfig& c) {
  json j = {{"suite", c.suite},
            {"seed", c.seed},
            {"grid_points", c.grid_points},
            {"k_max", c.k_max},
            {"bump", {{"r_inner", c.r_inner}, {"r_outer", c.r_outer}}},
            {"tolerances", c.tolerances},
            {"output_dir", c.output_dir},
            {"workers", c.workers},
            {"extension", {{"germ", c.extension.germ}, {"blid", c.extension.blid}}},
            {"cohomology", {{"order", c.cohomology.order}}},
            {"linearization",
             {{"maps", c.linearization.maps},
              {"delta", c.linearization.delta},
              {"delta_eta", c.linearization.delta_eta},
              {"alpha", c.linearization.alpha},
              {"epsilon", c.linearization.epsilon},
              {"directions_per_shell", c.linearization.directions_per_shell}}}};
  if (c.extension.input) j["extension"]["input"] = *c.extension.input;
  if (c.extension.output) j["extension"]["output"] = *c.extension.output;
  if (c.cohomology.matrix) j["cohomology"]["matrix"] = *c.cohomology.matrix;
  if (c.cohomology.jets) j["cohomology"]["jets"] = *c.cohomology.jets;
  return j;
}

std::string config_hash(const SuiteConfig& c) {
  // workers and output_dir do not influence results
  json j = to_json(c);
  j.erase("workers");
  j.erase("output_dir");
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// ---------------------------------------------------------------- report

bool Report::pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const Case& c) { return c.pass && !c.error; });
}

json to_json(const Report& r) {
  json cases = json::array();
  for (const auto& c : r.cases) {
    json e = {{"case_id", c.case_id}, {"quantity", c.quantity}, {"observed", c.observed},
              {"bound", c.bound},     {"pass", c.pass}};
    if (c.witness) e["witness"] = *c.witness;
    if (c.error) e["error"] = *c.error;
    if (!c.detail.is_null()) e["detail"] = c.detail;
    cases.push_back(std::move(e));
  }
  return {{"suite", r.suite},
          {"cases", cases},
          {"metadata", {{"seed", r.seed}, {"config_hash", r.config_hash}, {"version", kVersion}}}};
}

namespace {

std::string number(double v) { return json(v).dump(); }

std::string file_safe(std::string s) {
  for (char& ch : s)
    if (ch == '/' || ch == '=' || ch == ' ') ch = '_';
  return s;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::vector<fs::path> write_report(const Report& r, const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path json_path = dir / (r.suite + ".json");
  write_file(json_path, to_json(r).dump(2) + "\n");
  std::ostringstream csv;
  csv << "case_id,quantity,observed,bound,pass\n";
  for (const auto& c : r.cases)
    csv << c.case_id << ',' << c.quantity << ',' << number(c.observed) << ',' << number(c.bound) << ','
        << (c.pass && !c.error ? "true" : "false") << '\n';
  const fs::path csv_path = dir / (r.suite + ".csv");
  write_file(csv_path, csv.str());
  return {json_path, csv_path};
}

std::vector<fs::path> emit_plotdata(const Report& r, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<fs::path> out;
  std::ostringstream bounds;
  bounds << "k,observed,bound\n";
  for (const auto& c : r.cases)
    if (c.k) bounds << *c.k << ',' << number(c.observed) << ',' << number(c.bound) << '\n';
  out.push_back(dir / (r.suite + "-bounds.csv"));
  write_file(out.back(), bounds.str());
  for (const auto& c : r.cases) {
    if (c.series.empty()) continue;
    std::ostringstream s;
    s << "log10_t,log10_ratio\n";
    for (const auto& [x, y] : c.series) s << number(x) << ',' << number(y) << '\n';
    out.push_back(dir / (r.suite + "-series-" + file_safe(c.case_id) + ".csv"));
    write_file(out.back(), s.str());
  }
  return out;
}

// ---------------------------------------------------------------- cases

namespace {

struct Task {
  std::string id;
  std::function<std::vector<Case>()> run;
};

Case make_case(std::string id, std::string quantity, double observed, double bound, bool pass, json detail = {}) {
  Case c;
  c.case_id = std::move(id);
  c.quantity = std::move(quantity);
  c.observed = observed;
  c.bound = bound;
  c.pass = pass;
  c.detail = std::move(detail);
  return c;
}

json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

GridInterval unit_grid(const SuiteConfig& c) { return {0.0, 1.0, static_cast<std::size_t>(c.grid_points)}; }
BumpFunction bump_of(const SuiteConfig& c) { return {c.r_inner, c.r_outer}; }

// Segment blid around y(t) = 0.2 sin(2 pi t) with a band of half-width 0.25.
BlidMap demo_segment(const SuiteConfig& c) {
  const GridInterval grid = unit_grid(c);
  auto y = [](double t) { return 0.2 * std::sin(2.0 * M_PI * t); };
  PlaneBump band([y](double t) { return y(t) - 0.25; }, [y](double t) { return y(t) + 0.25; }, 0.25);
  return BlidMap::segment(CqElement::from_function(grid, y), band, bump_of(c));
}

/// Remainder series (log10 t, log10 ratio) with ratios clamped at the floor.
std::vector<std::pair<double, double>> remainder_series(const DiffReport& r) {
  std::vector<std::pair<double, double>> s;
  for (std::size_t i = 0; i < r.steps.size() && i < r.ratios.size(); ++i)
    s.emplace_back(std::log10(r.steps[i]), std::log10(std::max(r.ratios[i], kRemainderFloor)));
  return s;
}

Case diff_case(const std::string& id, const DiffReport& r, double min_slope) {
  const double slope = r.slope.value_or(std::numeric_limits<double>::quiet_NaN());
  const bool pass = r.pass && r.slope.has_value() && slope >= min_slope;
  Case c = make_case(id, "remainder slope", slope, min_slope, pass, to_json(r));
  c.series = remainder_series(r);
  if (!r.error.empty()) c.error = r.error;
  return c;
}

// Bounded-differentiability probe of an element blid at 0 with A = id over
// the standard directions scaled to sup_norm `radius`.
DiffReport blid_diff(const BlidMap& h, const GridInterval& grid, double radius) {
  const int q = h.kind() == BlidMap::Kind::Pointwise || h.kind() == BlidMap::Kind::Segment ? 0 : h.level();
  const CqElement prototype = CqElement::zero(q, grid);
  DirectionalProbe probe;
  probe.base = prototype.coordinates();
  const auto* proj = std::get_if<ProjectedBlid>(&h.construction());
  for (Vector v : standard_directions(grid, q)) {
    if (proj != nullptr) {
      // directions must lie in the subspace the blid acts on
      CqElement e = prototype.with_coordinates(v);
      e = proj->side == ProjectorSide::Image ? proj->projector(e) : e - proj->projector(e);
      const double n = sup_norm(e);
      if (n < 1e-12) continue;
      v = e.coordinates() / n;
    }
    probe.directions.push_back(radius * v);
  }
  probe.steps = DirectionalProbe::default_steps();
  probe.derivative = [](const Vector& v) { return v; };
  return bounded_diff_test(coordinate_map([h](const CqElement& x) { return h(x); }, prototype), probe);
}

std::vector<Task> verify_blid_tasks(const SuiteConfig& c) {
  std::vector<Task> tasks;
  const std::uint64_t seed = c.seed;
  const double identity_tol = c.tolerance("identity");

  auto identity_task = [&](const std::string& name, std::function<BlidMap()> make, std::optional<GridInterval> grid,
                           std::optional<double> radius) {
    tasks.push_back({"verify-blid/identity/" + name, [=]() {
                       const BlidMap h = make();
                       const IdentityReport r =
                           certify_local_identity(h, grid.value_or(unit_grid(c)), 200, seed, radius);
                       return std::vector<Case>{make_case("verify-blid/identity/" + name, "max |H(x) - x|",
                                                          r.max_error, identity_tol, r.max_error <= identity_tol,
                                                          {{"radius", r.radius}, {"samples", r.samples}})};
                     }});
  };
  identity_task("pointwise", [c]() { return BlidMap::pointwise(bump_of(c)); }, std::nullopt, c.r_inner);
  identity_task("taylor-integral-k2", [c]() { return BlidMap::taylor_integral(bump_of(c), 2); }, std::nullopt,
                std::nullopt);
  identity_task("scaled-c0.5", [c]() { return blid_scaled(0.5, bump_of(c)); }, std::nullopt, std::nullopt);
  identity_task("segment", [c]() { return demo_segment(c); }, std::nullopt, std::nullopt);
  identity_task("projected-even",
                [c]() { return BlidMap::projected(Projector::even_part(), BlidMap::pointwise(bump_of(c)),
                                                  ProjectorSide::Image); },
                GridInterval(-1.0, 1.0, static_cast<std::size_t>(c.grid_points)), std::nullopt);

  for (int k = 0; k <= 3; ++k) {
    const std::string id = "verify-blid/bound/k" + std::to_string(k);
    tasks.push_back({id, [=]() {
                       const BoundCertificate cert =
                           blid_bound_certificate(BlidMap::taylor_integral(bump_of(c), k), k, 1000, seed, unit_grid(c));
                       Case out = make_case(id, "sup ||H_k(x)||_k", cert.observed_max, cert.bound, cert.pass,
                                            {{"samples", cert.samples}, {"a", bump_of(c).sup_hu()}});
                       out.k = k;
                       if (cert.witness) out.witness = to_json(*cert.witness);
                       return std::vector<Case>{out};
                     }});
  }

  // Smallest integer k with k > 1 - log2(c), tabulated by hand.
  const std::vector<std::pair<double, int>> levels = {{0.5, 3}, {0.1, 5}, {0.01, 8}};
  for (const auto& [cval, expected] : levels) {
    std::ostringstream name;
    name << cval;
    const std::string level_id = "verify-blid/scaled-level/c" + name.str();
    tasks.push_back({level_id, [=]() {
                       const int k = minimal_scaled_level(cval);
                       return std::vector<Case>{make_case(level_id, "minimal level", k, expected, k == expected)};
                     }});
    const std::string cont_id = "verify-blid/containment/c" + name.str();
    tasks.push_back({cont_id, [=]() {
                       const BlidMap h = blid_scaled(cval, bump_of(c));
                       const FrechetMetric m{SeminormFamily::cinf_interval(), c.k_max};
                       const BoundCertificate cert = certify_containment(h, m, unit_grid(c), 500, seed);
                       Case out = make_case(cont_id, "sup d(H_c(x), 0)", cert.observed_max, cval, cert.pass,
                                            {{"level", cert.k}, {"samples", cert.samples}});
                       if (cert.witness) out.witness = to_json(*cert.witness);
                       return std::vector<Case>{out};
                     }});
  }

  const double slope = c.tolerance("diff_slope");
  auto diff_task = [&](const std::string& name, std::function<BlidMap()> make, std::optional<GridInterval> grid) {
    const std::string id = "verify-blid/diff/" + name;
    tasks.push_back({id, [=]() {
                       return std::vector<Case>{diff_case(id, blid_diff(make(), grid.value_or(unit_grid(c)), 10.0), slope)};
                     }});
  };
  diff_task("pointwise", [c]() { return BlidMap::pointwise(bump_of(c)); }, std::nullopt);
  diff_task("taylor-integral-k1", [c]() { return BlidMap::taylor_integral(bump_of(c), 1); }, std::nullopt);
  diff_task("taylor-integral-k2", [c]() { return BlidMap::taylor_integral(bump_of(c), 2); }, std::nullopt);
  diff_task("scaled-c0.5", [c]() { return blid_scaled(0.5, bump_of(c)); }, std::nullopt);
  diff_task("segment", [c]() { return demo_segment(c); }, std::nullopt);
  diff_task("projected-even",
            [c]() { return BlidMap::projected(Projector::even_part(), BlidMap::pointwise(bump_of(c)),
                                              ProjectorSide::Image); },
            GridInterval(-1.0, 1.0, static_cast<std::size_t>(c.grid_points)));

  for (const std::string map : {"quadratic-1d", "quadratic-2d"}) {
    const std::string id = "verify-blid/diff/" + map;
    tasks.push_back({id, [=]() {
                       const NonlinearPart f = nonlinear_catalog(map);
                       Rng rng = make_stream(seed, id);
                       DirectionalProbe probe;
                       probe.base = Vector::Zero(f.dimension());
                       for (int i = 0; i < 20; ++i) probe.directions.push_back(random_unit_vector(rng, f.dimension()));
                       probe.steps = DirectionalProbe::default_steps();
                       const Eigen::MatrixXd lambda = f.lambda().matrix();
                       probe.derivative = [lambda](const Vector& v) { return Vector(lambda * v); };
                       probe.tolerance = c.tolerance("remainder");
                       const DiffReport r = bounded_diff_test([f](const Vector& x) { return f.full(x); }, probe);
                       return std::vector<Case>{diff_case(id, r, slope)};
                     }});
  }

  tasks.push_back({"verify-blid/diff/step-control", [=]() {
                     DirectionalProbe probe;
                     probe.base = Vector::Zero(1);
                     probe.directions = {Vector::Ones(1)};
                     probe.steps = DirectionalProbe::default_steps();
                     probe.derivative = [](const Vector& v) { return Vector(0.0 * v); };
                     const DiffReport r = bounded_diff_test(
                         [](const Vector& x) { return Vector::Constant(1, x[0] > 0.0 ? 1.0 : 0.0); }, probe);
                     Case out = make_case("verify-blid/diff/step-control", "final remainder ratio (must fail)",
                                          r.ratios.empty() ? 0.0 : r.ratios.back(), probe.tolerance, !r.pass,
                                          to_json(r));
                     out.series = remainder_series(r);
                     return std::vector<Case>{out};
                   }});
  return tasks;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Eigen::VectorXcd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

json value_json(const Eigen::VectorXd& v) { return vec_json(v); }
json value_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

template <class Scalar>
std::vector<Case> extension_cases(const SuiteConfig& c, const Germ<Scalar>& germ) {
  std::vector<Case> out;
  const std::string tag = c.extension.germ + "-" + c.extension.blid;
  const GlobalMap<Scalar> f = extend(germ, blid_by_name(c.extension.blid, bump_of(c)));
  const GridInterval grid = unit_grid(c);
  const AgreementReport a = agreement_check(f, 200, c.seed, grid, c.tolerance("agreement"));
  out.push_back(make_case("extend/agreement/" + tag, "max |F(x) - f(x)|", a.max_deviation, c.tolerance("agreement"),
                          a.pass, to_json(a)));
  const BoundednessReport b = boundedness_check(f, {0, 1}, 200, c.seed, grid);
  for (const auto& o : b.orders)
    out.push_back(make_case("extend/boundedness/" + tag + "/order" + std::to_string(o.order),
                            "growth of sup over magnitudes", o.growth_ratio, 1.1, o.bounded,
                            {{"stratum_sup", o.stratum_sup}, {"magnitudes", b.magnitudes}}));
  if (c.extension.input) {
    std::ifstream in(*c.extension.input);
    if (!in) throw std::runtime_error("cannot open " + *c.extension.input);
    const CqElement x = element_from_json(json::parse(in));
    if (x.q() < f.blid().level())
      throw WrongSpace("input element has q = " + std::to_string(x.q()) + " but the blid acts on q = " +
                       std::to_string(f.blid().level()));
    const auto value = f(x);
    json result = {{"germ", c.extension.germ}, {"blid", c.extension.blid}, {"value", value_json(value)},
                   {"agreement", to_json(a)}, {"boundedness", to_json(b)}};
    if (c.extension.output) {
      std::ofstream o(*c.extension.output);
      if (!o) throw std::runtime_error("cannot write " + *c.extension.output);
      o << result.dump(2) << "\n";
    }
    out.push_back(make_case("extend/evaluate", "|F(x)|", max_abs(value), std::numeric_limits<double>::infinity(),
                            std::isfinite(max_abs(value)), result));
  }
  return out;
}

std::vector<Task> extend_tasks(const SuiteConfig& c) {
  std::vector<Task> tasks;
  const std::uint64_t seed = c.seed;
  tasks.push_back({"extend/configured", [=]() {
                     if (kComplexGerms.count(c.extension.germ))
                       return extension_cases(c, complex_germ(c.extension.germ));
                     return extension_cases(c, real_germ(c.extension.germ));
                   }});
  if (c.extension.germ != "complex-phase" || c.extension.blid != "pointwise")
    tasks.push_back({"extend/agreement/complex-phase", [=]() {
                       const ComplexGlobalMap f = extend(complex_germ("complex-phase"), BlidMap::pointwise(bump_of(c)));
                       const AgreementReport a = agreement_check(f, 200, seed, unit_grid(c), c.tolerance("identity"));
                       return std::vector<Case>{make_case("extend/agreement/complex-phase-pointwise",
                                                          "max |F(x) - f(x)|", a.max_deviation, c.tolerance("identity"),
                                                          a.pass, to_json(a))};
                     }});

  // Fixed checks on the integral germ of 1 / (1 - x) with the pointwise blid.
  auto example1 = [c]() { return extend(real_germ("example1"), BlidMap::pointwise(bump_of(c))); };
  tasks.push_back({"extend/example1/agreement", [=]() {
                     const AgreementReport a =
                         agreement_check(example1(), 200, seed, unit_grid(c), c.tolerance("agreement"), 0.3);
                     return std::vector<Case>{make_case("extend/example1/agreement", "max |F(x) - f(x)|, ||x|| <= 0.3",
                                                        a.max_deviation, c.tolerance("agreement"), a.pass, to_json(a))};
                   }});
  tasks.push_back({"extend/example1/constant-2", [=]() {
                     const GridInterval grid = unit_grid(c);
                     const double v = example1()(CqElement::from_function(grid, [](double) { return 2.0; }))[0];
                     return std::vector<Case>{
                         make_case("extend/example1/constant-2", "|F(2) - 1|", std::abs(v - 1.0), 0.0, v == 1.0)};
                   }});
  tasks.push_back({"extend/example1/closed-form", [=]() {
                     const GridInterval grid = unit_grid(c);
                     const double v = example1()(CqElement::from_function(grid, [](double t) { return t / 4.0; }))[0];
                     const double oracle = 4.0 * std::log(4.0 / 3.0);
                     const double err = std::abs(v - oracle);
                     return std::vector<Case>{make_case("extend/example1/closed-form", "|F(t/4) - 4 ln(4/3)|", err,
                                                        c.tolerance("closed_form"), err <= c.tolerance("closed_form"),
                                                        {{"value", v}, {"oracle", oracle}})};
                   }});
  tasks.push_back({"extend/example1/global-sup", [=]() {
                     const RealGlobalMap f = example1();
                     const GridInterval grid = unit_grid(c);
                     Rng rng = make_stream(seed, "example1-global-sup");
                     const std::vector<double> magnitudes = {0.1, 1.0, 10.0, 100.0, 1000.0};
                     double worst = 0.0;
                     for (int s = 0; s < 1000; ++s) {
                       const double m = magnitudes[static_cast<std::size_t>(s) % magnitudes.size()];
                       const CqElement x = random_element_with_norm(rng, grid, 0, m * uniform(rng, 0.5, 1.0), s % 2 == 1);
                       worst = std::max(worst, std::abs(f(x)[0]));
                     }
                     const double bound = 1.0 / (1.0 - bump_of(c).sup_hu()) + 1e-9;
                     return std::vector<Case>{make_case("extend/example1/global-sup", "sup |F(x)|", worst, bound,
                                                        worst <= bound, {{"samples", 1000}})};
                   }});
  return tasks;
}

RealJets factorial_jets(int m) {
  RealJets jets(1, m);
  for (int j = 0; j <= m; ++j) jets[j].coeffs()[0] = factorial(j);
  return jets;
}

RealJets demo_jets_2d() {
  RealJets jets(2, 3);
  jets[0].coeffs()[0] = 0.5;
  jets[1].coeff({1, 0}) = 1.0;
  jets[1].coeff({0, 1}) = -2.0;
  jets[2].coeff({1, 1}) = 2.0;
  jets[2].coeff({0, 2}) = 1.0;
  jets[3].coeff({3, 0}) = 6.0;
  jets[3].coeff({1, 2}) = -3.0;
  return jets;
}

std::vector<Case> jet_cases(const std::string& prefix, const RealJets& jets, const BumpFunction& bump,
                            const std::vector<Vector>& directions) {
  const BorelRealization f = borel_realize(jets, bump);
  const JetReport r = jet_verify([&f](const Vector& x) { return f(x); }, jets, directions, f.identity_radius());
  std::vector<Case> out;
  for (int j = 0; j <= jets.truncation(); ++j) {
    double worst = 0.0;
    bool pass = true;
    json checks = json::array();
    for (const auto& ch : r.checks) {
      if (ch.degree != j) continue;
      worst = std::max(worst, ch.error);
      pass = pass && ch.pass;
      checks.push_back({{"direction", ch.direction}, {"estimate", ch.estimate}, {"expected", ch.expected}});
    }
    out.push_back(make_case(prefix + "/derivative" + std::to_string(j), "relative error of d^j f(0)", worst,
                            jet_tolerance(j), pass, {{"checks", checks}, {"scale", f.identity_radius()}}));
  }
  return out;
}

std::vector<Task> borel_tasks(const SuiteConfig& c) {
  std::vector<Task> tasks;
  tasks.push_back({"borel/factorial", [=]() {
                     return jet_cases("borel/factorial", factorial_jets(5), bump_of(c),
                                      {Vector::Ones(1), Vector::Constant(1, -1.0)});
                   }});
  tasks.push_back({"borel/global-bound", [=]() {
                     const RealJets jets = factorial_jets(5);
                     const BorelRealization f = borel_realize(jets, bump_of(c));
                     double worst = 0.0;
                     const int n = 200001;
                     for (int i = 0; i < n; ++i) {
                       const double x = -1000.0 + 2000.0 * i / (n - 1);
                       worst = std::max(worst, std::abs(f(Vector::Constant(1, x))));
                     }
                     Rng rng = make_stream(c.seed, "borel-global");
                     for (int i = 0; i < 20000; ++i)
                       worst = std::max(worst, std::abs(f(Vector::Constant(1, std::ldexp(uniform(rng, -1.0, 1.0),
                                                                                          -static_cast<int>(i % 12))))));
                     double base = std::abs(jets[0].coeffs()[0]);
                     for (int j = 1; j <= jets.truncation(); ++j) base += std::ldexp(1.0, -j);
                     const double bound = base * (1.0 + c.tolerance("borel_margin"));
                     return std::vector<Case>{make_case("borel/global-bound", "sup |f(x)|, |x| <= 1e3", worst, bound,
                                                        worst <= bound,
                                                        {{"scales", f.scales()}, {"analytic_bound", f.global_bound()}})};
                   }});
  tasks.push_back({"borel/identity", [=]() {
                     const RealJets jets = factorial_jets(5);
                     const BorelRealization f = borel_realize(jets, bump_of(c));
                     double worst = 0.0;
                     for (int i = 0; i <= 1000; ++i) {
                       const Vector x = Vector::Constant(1, f.identity_radius() * (-1.0 + 2.0 * i / 1000.0));
                       const double t = jets.taylor(x);
                       worst = std::max(worst, std::abs(f(x) - t) / std::max(1.0, std::abs(t)));
                     }
                     return std::vector<Case>{make_case("borel/identity", "max |f - Taylor| on identity ball", worst,
                                                        c.tolerance("identity"), worst <= c.tolerance("identity"),
                                                        {{"radius", f.identity_radius()}})};
                   }});
  tasks.push_back({"borel/plane", [=]() {
                     Rng rng = make_stream(c.seed, "borel-plane");
                     std::vector<Vector> dirs;
                     for (int i = 0; i < 4; ++i) dirs.push_back(random_unit_vector(rng, 2));
                     return jet_cases("borel/plane", demo_jets_2d(), bump_of(c), dirs);
                   }});
  return tasks;
}

LinearAuto scalar_auto(double a) { return LinearAuto(Eigen::MatrixXd::Constant(1, 1, a)); }

json polys_json(const RealJets& q) { return to_json(q); }

std::vector<Task> cohomology_tasks(const SuiteConfig& c) {
  std::vector<Task> tasks;
  const double coeff_tol = c.tolerance("coefficient");
  auto exact = [&](const std::string& name, int n, double expected) {
    const std::string id = "cohomology/exact/" + name;
    tasks.push_back({id, [=]() {
                       HomPoly<double> p(1, n);
                       p.coeffs()[0] = 1.0;
                       const HomPoly<double> q = solve_order(scalar_auto(2.0), n, p);
                       const double err = std::abs(q.coeffs()[0] - expected);
                       return std::vector<Case>{make_case(id, "coefficient error", err, coeff_tol, err <= coeff_tol,
                                                          {{"q", q.coeffs()[0]}, {"expected", expected}})};
                     }});
  };
  exact("x", 1, 1.0);
  exact("x2", 2, 1.0 / 3.0);

  tasks.push_back({"cohomology/resonance/xy", [=]() {
                     Eigen::MatrixXd a(2, 2);
                     a << 2.0, 0.0, 0.0, 0.5;
                     HomPoly<double> p(2, 2);
                     p.coeff({1, 1}) = 1.0;
                     try {
                       solve_order(LinearAuto(a), 2, p);
                     } catch (const Unsolvable& e) {
                       const bool found =
                           std::find(e.resonant().begin(), e.resonant().end(), MultiIndex{1, 1}) != e.resonant().end();
                       json res = json::array();
                       for (const auto& alpha : e.resonant()) res.push_back(to_string(alpha));
                       return std::vector<Case>{make_case("cohomology/resonance/xy", "inconsistency residual",
                                                          e.residual(), kSingularThreshold, found,
                                                          {{"unsolvable", e.what()}, {"resonances", res}})};
                     }
                     return std::vector<Case>{make_case("cohomology/resonance/xy", "inconsistency residual", 0.0,
                                                        kSingularThreshold, false, {{"unsolvable", false}})};
                   }});

  tasks.push_back({"cohomology/eigenvalue-law", [=]() {
                     Rng rng = make_stream(c.seed, "eigenvalue-law");
                     double worst = 0.0;
                     json trials = json::array();
                     for (int trial = 0; trial < 20; ++trial) {
                       const int d = 1 + trial % 3;
                       const int n = 1 + (trial / 3) % 4;
                       Eigen::MatrixXd a(d, d);
                       for (int i = 0; i < d; ++i)
                         for (int j = 0; j < d; ++j) a(i, j) = uniform(rng, -1.0, 1.0) + (i == j ? 1.5 : 0.0);
                       const double err = eigenvalue_law_error(LinearAuto(a), n);
                       worst = std::max(worst, err);
                       trials.push_back({{"d", d}, {"n", n}, {"error", err}});
                     }
                     return std::vector<Case>{make_case("cohomology/eigenvalue-law", "max spectral mismatch", worst,
                                                        c.tolerance("eigenvalue_law"),
                                                        worst <= c.tolerance("eigenvalue_law"), {{"trials", trials}})};
                   }});

  tasks.push_back({"cohomology/residual-order", [=]() {
                     RealJets f(1, 3);
                     f[1].coeffs()[0] = 1.0;
                     f[2].coeffs()[0] = 2.0;
                     f[3].coeffs()[0] = 6.0;
                     const int m = 2;
                     RealJets fm(1, m);
                     for (int j = 0; j <= m; ++j) fm[j] = f[j];
                     const LinearAuto a = scalar_auto(2.0);
                     const TruncatedSolution<double> sol = solve_truncated(a, fm);
                     const ResidualOrderReport r = residual_order_check<double>(
                         sol.q, a, [&f](const Vector& x) { return f.taylor(x); }, m, 3, 2, c.seed);
                     json detail = to_json(r);
                     detail["q"] = polys_json(sol.q);
                     return std::vector<Case>{
                         make_case("cohomology/residual-order", "min residual slope", r.min_slope, m + 0.5, r.pass, detail)};
                   }});

  if (c.cohomology.matrix && c.cohomology.jets) {
    tasks.push_back({"cohomology/fixture", [=]() {
                       auto load = [](const std::string& p) {
                         std::ifstream in(p);
                         if (!in) throw std::runtime_error("cannot open " + p);
                         return json::parse(in);
                       };
                       const LinearAuto a = linear_auto_from_json(load(*c.cohomology.matrix));
                       const RealJets all = real_jets_from_json(load(*c.cohomology.jets));
                       const int m = std::min(c.cohomology.order, all.truncation());
                       RealJets f(all.dimension(), m);
                       for (int j = 0; j <= m; ++j) f[j] = all[j];
                       std::vector<Case> out;
                       try {
                         const TruncatedSolution<double> sol = solve_truncated(a, f);
                         json res = json::array();
                         for (const auto& level : sol.resonances) {
                           json l = json::array();
                           for (const auto& alpha : level) l.push_back(to_string(alpha));
                           res.push_back(l);
                         }
                         const ResidualOrderReport r = residual_order_check<double>(
                             sol.q, a, [&all](const Vector& x) { return all.taylor(x); }, m,
                             all.truncation(), 4, c.seed);
                         json detail = {{"Q", polys_json(sol.q)},
                                        {"resonances", res},
                                        {"hyperbolic", sol.hyperbolic},
                                        {"residual_report", to_json(r)}};
                         out.push_back(make_case("cohomology/fixture/coefficients", "coefficient residual",
                                                 sol.coefficient_residual, coeff_tol,
                                                 sol.coefficient_residual <= coeff_tol, detail));
                         out.push_back(make_case("cohomology/fixture/residual-order",
                                                 r.polynomial_case ? "max residual" : "min residual slope",
                                                 r.polynomial_case ? r.max_residual : r.min_slope,
                                                 r.polynomial_case ? 1e-12 : m + 0.5, r.pass, to_json(r)));
                       } catch (const Unsolvable& e) {
                         json res = json::array();
                         for (const auto& alpha : e.resonant()) res.push_back(to_string(alpha));
                         Case failed = make_case("cohomology/fixture/coefficients", "inconsistency residual",
                                                 e.residual(), kSingularThreshold, false,
                                                 {{"degree", e.degree()}, {"resonances", res}});
                         failed.error = std::string("Unsolvable: ") + e.what();
                         out.push_back(failed);
                       }
                       return out;
                     }});
  }
  return tasks;
}

std::vector<Task> linearization_tasks(const SuiteConfig& c) {
  std::vector<Task> tasks;
  for (const std::string& map : c.linearization.maps) {
    const std::string prefix = "linearize-cutoff/" + map;
    tasks.push_back({prefix, [=]() {
                       const auto& L = c.linearization;
                       const NonlinearPart f = nonlinear_catalog(map);
                       const FirstOrderBlid h = certify_first_order(bump_of(c));
                       const SplitReport split =
                           split_bound_check(h, L.delta, L.epsilon, 2000, c.seed, f.dimension());
                       CutoffParams params;
                       params.delta = L.delta;
                       params.delta_eta = L.delta_eta;
                       params.alpha = L.alpha;
                       params.M = catalog_holder_constant(map);
                       params.c0 = h.c0;
                       params.c1 = h.c1;
                       params.epsilon = L.epsilon;
                       params.m = split.m;
                       const CutoffReport r = verify_76(f, h, params, L.directions_per_shell, c.seed);
                       const json detail = to_json(r);
                       json witnesses = json::array();
                       for (const auto& w : r.witnesses) witnesses.push_back(vec_json(w));
                       const auto [f0, df0] = f.fixed_point_defects();
                       std::vector<Case> out;
                       out.push_back(make_case(prefix + "/fixed-point", "|f(0)| + |Df(0)|", f0 + df0, 1e-6,
                                               f0 + df0 <= 1e-6));
                       out.push_back(make_case(prefix + "/split", "sampled m", split.m_empirical, split.m, split.pass,
                                               to_json(split)));
                       out.push_back(make_case(prefix + "/agreement", "max |f~(x) - f(x)|, |x| < delta r_inner",
                                               r.agreement_max_error, c.tolerance("identity"),
                                               r.agreement_max_error <= c.tolerance("identity")));
                       Case s1 = make_case(prefix + "/S1", "sup ||Df~||", r.S1, r.bound1, r.pass1,
                                           {{"hypothesis1", r.hypothesis1},
                                            {"hypothesis1_holds", r.hypothesis1_holds},
                                            {"delta_eta", L.delta_eta}});
                       Case s2 = make_case(prefix + "/S2", "sup ||Df~(x)|| / ||x||^alpha", r.S2, r.bound2, r.pass2,
                                           {{"m", r.m}, {"M", params.M}, {"c1", h.c1},
                                            {"holder_observed", r.holder_observed}});
                       if (!r.pass1) s1.witness = witnesses.at(0);
                       if (!r.pass2) s2.witness = witnesses.at(1);
                       out.push_back(s1);
                       out.push_back(s2);
                       out.push_back(make_case(prefix + "/exterior-derivative", "sup ||Df~|| beyond delta r_outer",
                                               r.exterior_max_derivative, 1e-12, r.exterior_max_derivative <= 1e-12,
                                               {{"samples", r.exterior_samples}}));
                       out.push_back(make_case(prefix + "/global-bound", "sup ||f~||, ||x|| <= 1e3 delta", r.sup_cutoff,
                                               r.sup_local, r.sup_cutoff <= r.sup_local * (1.0 + 1e-12),
                                               {{"caveat", r.caveat}}));
                       out.push_back(make_case(prefix + "/report", "all conditions", r.pass ? 1.0 : 0.0, 1.0, r.pass,
                                               detail));
                       return out;
                     }});
  }
  return tasks;
}

std::vector<Task> tasks_for(const std::string& suite, const SuiteConfig& c) {
  if (suite == "verify-blid") return verify_blid_tasks(c);
  if (suite == "extend") return extend_tasks(c);
  if (suite == "borel") return borel_tasks(c);
  if (suite == "cohomology") return cohomology_tasks(c);
  if (suite == "linearize-cutoff") return linearization_tasks(c);
  std::vector<Task> all;
  for (const auto& s : kSuites) {
    if (s == "all") continue;
    auto part = tasks_for(s, c);
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return all;
}

}  // namespace

Report run_suite(const SuiteConfig& config) {
  validate(config);
  const std::vector<Task> tasks = tasks_for(config.suite, config);
  std::vector<std::vector<Case>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = tasks[i].run();
      } catch (const std::exception& e) {
        Case failed = make_case(tasks[i].id, "error", std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(), false);
        failed.error = e.what();
        results[i] = {failed};
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(config.workers, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Report report;
  report.suite = config.suite;
  report.seed = config.seed;
  report.config_hash = config_hash(config);
  for (auto& r : results)
    for (auto& c : r) report.cases.push_back(std::move(c));
  std::stable_sort(report.cases.begin(), report.cases.end(),
                   [](const Case& a, const Case& b) { return a.case_id < b.case_id; });
  return report;
}

}  // namespace blidkit
