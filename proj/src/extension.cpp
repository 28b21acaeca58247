#include "blidkit/extension.hpp"

#include <cmath>

namespace blidkit {

namespace {

double evaluate_terms(const std::vector<RationalIntegrand::Term>& terms, double t, double x) {
  double s = 0.0;
  for (const auto& term : terms) s += term.coeff * std::pow(t, term.t_power) * std::pow(x, term.x_power);
  return s;
}

std::vector<RationalIntegrand::Term> terms_from_json(const nlohmann::json& j) {
  std::vector<RationalIntegrand::Term> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 3)
      throw std::invalid_argument("rational integrand: each term must be [t_power, x_power, coeff]");
    out.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
  }
  return out;
}

}  // namespace

double RationalIntegrand::operator()(double t, double x) const {
  const double num = evaluate_terms(numerator, t, x);
  return denominator.empty() ? num : num / evaluate_terms(denominator, t, x);
}

RationalIntegrand RationalIntegrand::from_json(const nlohmann::json& j) {
  RationalIntegrand g;
  g.numerator = terms_from_json(j.at("numerator"));
  if (j.contains("denominator")) g.denominator = terms_from_json(j.at("denominator"));
  return g;
}

RealGerm integral_germ(std::string name, RationalIntegrand g, double validity_radius) {
  RealGerm germ;
  germ.name = std::move(name);
  germ.validity_radius = validity_radius;
  germ.local_map = [g = std::move(g)](const CqElement& x) {
    const Vector values = reconstruct_derivative(x, 0);
    Vector integrand(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i)
      integrand[i] = g(x.grid().point(static_cast<std::size_t>(i)), values[i]);
    Vector out(1);
    out[0] = simpson(integrand, x.grid().spacing());
    return out;
  };
  return germ;
}

RealGerm real_germ(const std::string& name, const nlohmann::json& params) {
  if (name == "example1") {
    // 1 / (1 - x)
    RationalIntegrand g{{{0, 0, 1.0}}, {{0, 0, 1.0}, {0, 1, -1.0}}};
    return integral_germ("example1", std::move(g), 1.0);
  }
  if (name == "constant") {
    const double c = params.value("value", 1.0);
    RealGerm germ;
    germ.name = "constant";
    germ.local_map = [c](const CqElement&) { return Vector::Constant(1, c); };
    return germ;
  }
  if (name == "mean-square") {
    RationalIntegrand g{{{0, 2, 1.0}}, {}};
    return integral_germ("mean-square", std::move(g), std::numeric_limits<double>::infinity());
  }
  if (name == "rational") {
    return integral_germ("rational", RationalIntegrand::from_json(params),
                         params.value("validity_radius", std::numeric_limits<double>::infinity()));
  }
  throw std::invalid_argument("unknown germ '" + name + "'");
}

ComplexGerm complex_germ(const std::string& name, const nlohmann::json&) {
  if (name == "complex-phase") {
    ComplexGerm germ;
    germ.name = name;
    germ.local_map = [](const CqElement& x) {
      const Vector values = reconstruct_derivative(x, 0);
      const double h = x.grid().spacing();
      Eigen::VectorXcd out(1);
      out[0] = {simpson(values.array().cos().matrix(), h), simpson(values.array().sin().matrix(), h)};
      return out;
    };
    return germ;
  }
  throw std::invalid_argument("unknown complex germ '" + name + "'");
}

BlidMap blid_by_name(const std::string& kind, const BumpFunction& bump, const nlohmann::json& params) {
  if (kind == "pointwise") return BlidMap::pointwise(bump);
  if (kind == "taylor-integral") return BlidMap::taylor_integral(bump, params.value("level", 1));
  if (kind == "scaled") return blid_scaled(params.value("c", 0.5), bump);
  throw std::invalid_argument("unknown blid kind '" + kind + "'");
}

nlohmann::json to_json(const AgreementReport& r) {
  return {{"radius", r.radius}, {"samples", r.samples}, {"max_deviation", r.max_deviation}, {"pass", r.pass}};
}

nlohmann::json to_json(const BoundednessReport& r) {
  nlohmann::json orders = nlohmann::json::array();
  for (const auto& o : r.orders)
    orders.push_back({{"order", o.order},
                      {"stratum_sup", o.stratum_sup},
                      {"sup", o.sup},
                      {"growth_ratio", o.growth_ratio},
                      {"bounded", o.bounded}});
  return {{"magnitudes", r.magnitudes}, {"orders", orders}, {"samples", r.samples}, {"pass", r.pass},
          {"note", "derivatives verified numerically only up to the listed orders"}};
}

}  // namespace blidkit
