#include "blidkit/jets.hpp"

#include <algorithm>
#include <sstream>

#include "blidkit/blid.hpp"
#include "blidkit/differentiability.hpp"

namespace blidkit {

namespace {

void fill_indices(int remaining_vars, int remaining_degree, MultiIndex& prefix, std::vector<MultiIndex>& out) {
  if (remaining_vars == 1) {
    prefix.push_back(remaining_degree);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int p = remaining_degree; p >= 0; --p) {
    prefix.push_back(p);
    fill_indices(remaining_vars - 1, remaining_degree - p, prefix, out);
    prefix.pop_back();
  }
}

template <class Scalar>
Scalar coefficient_from_json(const nlohmann::json& v);

template <>
double coefficient_from_json<double>(const nlohmann::json& v) {
  return v.get<double>();
}

template <>
std::complex<double> coefficient_from_json<std::complex<double>>(const nlohmann::json& v) {
  if (v.is_array()) return {v.at(0).get<double>(), v.at(1).get<double>()};
  return {v.get<double>(), 0.0};
}

nlohmann::json coefficient_to_json(double c) { return c; }
nlohmann::json coefficient_to_json(const std::complex<double>& c) { return nlohmann::json::array({c.real(), c.imag()}); }

template <class Scalar>
JetSequence<Scalar> jets_from_json(const nlohmann::json& j) {
  const int d = j.at("dimension").get<int>();
  if (d < 1) throw std::invalid_argument("jets: dimension must be positive");
  int m = 0;
  for (const auto& e : j.at("entries")) m = std::max(m, e.at("degree").get<int>());
  JetSequence<Scalar> jets(d, m);
  for (const auto& e : j.at("entries")) {
    const int degree = e.at("degree").get<int>();
    if (degree < 0) throw std::invalid_argument("jets: negative degree");
    for (const auto& [key, value] : e.at("coefficients").items()) {
      const MultiIndex alpha = parse_multi_index(key);
      int total = 0;
      for (int a : alpha) total += a;
      if (static_cast<int>(alpha.size()) != d || total != degree)
        throw std::invalid_argument("jets: multi-index " + key + " does not match degree " + std::to_string(degree) +
                                    " in dimension " + std::to_string(d));
      jets[degree].coeff(alpha) = coefficient_from_json<Scalar>(value);
    }
  }
  return jets;
}

template <class Scalar>
nlohmann::json jets_to_json(const JetSequence<Scalar>& jets) {
  nlohmann::json entries = nlohmann::json::array();
  for (int j = 0; j <= jets.truncation(); ++j) {
    nlohmann::json coeffs = nlohmann::json::object();
    const auto& p = jets[j];
    for (std::size_t i = 0; i < p.basis().size(); ++i) {
      const Scalar c = p.coeffs()[static_cast<Eigen::Index>(i)];
      if (c != Scalar{}) coeffs[to_string(p.basis()[i])] = coefficient_to_json(c);
    }
    entries.push_back({{"degree", j}, {"coefficients", coeffs}});
  }
  return {{"dimension", jets.dimension()}, {"entries", entries}};
}

}  // namespace

std::vector<MultiIndex> multi_indices(int d, int n) {
  if (d < 1 || n < 0) throw std::invalid_argument("multi_indices: need d >= 1 and n >= 0");
  std::vector<MultiIndex> out;
  MultiIndex prefix;
  fill_indices(d, n, prefix, out);
  return out;
}

std::size_t multi_index_count(int d, int n) {
  // C(n + d - 1, d - 1)
  std::size_t r = 1;
  for (int i = 1; i < d; ++i) r = r * static_cast<std::size_t>(n + i) / static_cast<std::size_t>(i);
  return r;
}

std::string to_string(const MultiIndex& alpha) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i];
  os << ')';
  return os.str();
}

MultiIndex parse_multi_index(const std::string& s) {
  std::string body;
  for (char c : s)
    if (c != '(' && c != ')' && c != ' ') body.push_back(c);
  MultiIndex out;
  std::stringstream ss(body);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    const int v = std::stoi(part, &used);
    if (used != part.size() || v < 0) throw std::invalid_argument("invalid multi-index '" + s + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty multi-index '" + s + "'");
  return out;
}

RealJets real_jets_from_json(const nlohmann::json& j) { return jets_from_json<double>(j); }
ComplexJets complex_jets_from_json(const nlohmann::json& j) { return jets_from_json<std::complex<double>>(j); }
nlohmann::json to_json(const RealJets& jets) { return jets_to_json(jets); }
nlohmann::json to_json(const ComplexJets& jets) { return jets_to_json(jets); }

BorelRealization::BorelRealization(RealJets jets, BumpFunction bump) : jets_(std::move(jets)), bump_(bump) {
  constexpr int kTopRung = 10;
  constexpr int kBottomRung = -60;
  const double a = bump_.sup_hu();
  scales_.assign(static_cast<std::size_t>(jets_.truncation() + 1), 0.0);
  identity_radius_ = std::ldexp(1.0, kTopRung) * bump_.r_inner();
  global_bound_ = std::abs(jets_[0].coeffs()[0]);
  for (int j = 1; j <= jets_.truncation(); ++j) {
    const double norm = jets_[j].coefficient_norm();
    const double target = std::ldexp(1.0, -j);
    auto term_bound = [&](double eps) { return norm * std::pow(eps * a, j) / factorial(j); };
    double eps = 0.0;
    for (int rung = kTopRung; rung >= kBottomRung; --rung) {
      if (term_bound(std::ldexp(1.0, rung)) <= target) {
        eps = std::ldexp(1.0, rung);
        break;
      }
    }
    if (eps == 0.0)
      throw ScaleNotFound("borel_realize: no admissible scale for degree " + std::to_string(j) +
                          " (coefficient norm " + std::to_string(norm) + ")");
    scales_[static_cast<std::size_t>(j)] = eps;
    global_bound_ += term_bound(eps);
    if (norm > 0.0) identity_radius_ = std::min(identity_radius_, eps * bump_.r_inner());
  }
}

double BorelRealization::operator()(const Vector& x) const {
  if (x.size() != jets_.dimension()) throw ShapeMismatch("BorelRealization: dimension mismatch");
  double total = jets_[0].coeffs()[0];
  for (int j = 1; j <= jets_.truncation(); ++j) {
    if (jets_[j].coefficient_norm() == 0.0) continue;
    const Vector y = blid_rescaled(bump_, scales_[static_cast<std::size_t>(j)], x);
    total += jets_[j](y) / factorial(j);
  }
  return total;
}

BorelRealization borel_realize(const RealJets& jets, const BumpFunction& bump) { return {jets, bump}; }

double jet_tolerance(int degree) { return degree <= 4 ? 1e-3 : 1e-2; }

nlohmann::json to_json(const JetReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"degree", c.degree},
                      {"direction", c.direction},
                      {"estimate", c.estimate},
                      {"expected", c.expected},
                      {"error", c.error},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  return {{"checks", checks}, {"pass", r.pass}, {"caveat", r.caveat}};
}

JetReport jet_verify(const std::function<double(const Vector&)>& f, const RealJets& jets,
                     const std::vector<Vector>& directions, double scale) {
  JetReport report;
  report.caveat = "derivative orders >= 5 are verified at relative tolerance 1e-2 only";
  for (std::size_t di = 0; di < directions.size(); ++di) {
    const Vector& v = directions[di];
    auto along = [&](double t) { return f(Vector(t * v)); };
    for (int j = 0; j <= jets.truncation(); ++j) {
      JetCheck c;
      c.degree = j;
      c.direction = static_cast<int>(di);
      c.expected = jets[j](v);
      c.estimate = j == 0 ? along(0.0) : derivative_at_zero(along, j, default_fd_step(j, scale));
      const double diff = std::abs(c.estimate - c.expected);
      c.error = std::abs(c.expected) > 1e-12 ? diff / std::abs(c.expected) : diff;
      c.tolerance = jet_tolerance(j);
      c.pass = c.error <= c.tolerance;
      report.checks.push_back(c);
    }
  }
  report.pass = std::all_of(report.checks.begin(), report.checks.end(), [](const JetCheck& c) { return c.pass; });
  return report;
}

}  // namespace blidkit
