#include "blidkit/linearization.hpp"

#include <algorithm>
#include <cmath>

#include "blidkit/blid.hpp"
#include "blidkit/sampling.hpp"

namespace blidkit {

namespace {

double sup(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

std::vector<double> vec(const Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

Vector FirstOrderBlid::operator()(const Vector& x) const { return blid_pointwise(bump, x); }

FirstOrderBlid certify_first_order(const BumpFunction& bump) {
  return {bump, bump.sup_hu(), bump.sup_damp_derivative()};
}

NonlinearPart::NonlinearPart(std::string name, VectorMap map, LinearAuto lambda)
    : name_(std::move(name)), map_(std::move(map)), lambda_(std::move(lambda)) {}

std::pair<double, double> NonlinearPart::fixed_point_defects() const {
  const Vector origin = Vector::Zero(dimension());
  const VectorMap f = [this](const Vector& x) { return (*this)(x); };
  return {sup((*this)(origin)), sup_operator_norm(jacobian(f, origin, 1e-6))};
}

NonlinearPart nonlinear_catalog(const std::string& name) {
  if (name == "quadratic-1d") {
    Eigen::MatrixXd lambda(1, 1);
    lambda << 2.0;
    return NonlinearPart(
        name, [](const Vector& x) { return Vector((2.0 * x.array() + x.array().square()).matrix()); },
        LinearAuto(lambda));
  }
  if (name == "quadratic-2d") {
    Eigen::MatrixXd lambda(2, 2);
    lambda << 2.0, 0.0, 0.0, 0.5;
    return NonlinearPart(
        name,
        [](const Vector& x) {
          Vector out(2);
          out << 2.0 * x[0] + x[1] * x[1], 0.5 * x[1] + x[0] * x[0];
          return out;
        },
        LinearAuto(lambda));
  }
  throw std::invalid_argument("unknown map '" + name + "'");
}

double catalog_holder_constant(const std::string& name) {
  if (name == "quadratic-1d" || name == "quadratic-2d") return 2.0;
  throw std::invalid_argument("unknown map '" + name + "'");
}

VectorMap cutoff(const NonlinearPart& f, const FirstOrderBlid& h, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("cutoff: delta must be positive");
  if (!(h.c0 > 0.0) || !(h.c1 > 0.0) || !std::isfinite(h.c0) || !std::isfinite(h.c1))
    throw std::invalid_argument("cutoff: blid certificates (c0, c1) are missing");
  // delta H(x / delta) written as h(x_i / delta) x_i, so the plateau returns x bit for bit
  return [f, h, delta](const Vector& x) {
    Vector y(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = h.bump(x[i] / delta) * x[i];
    return f(y);
  };
}

nlohmann::json to_json(const SplitReport& r) {
  return {{"delta", r.delta},         {"epsilon", r.epsilon},
          {"small_max", r.small_max}, {"large_max", r.large_max},
          {"identity_max_error", r.identity_max_error},
          {"m", r.m},                 {"m_empirical", r.m_empirical},
          {"pass", r.pass}};
}

SplitReport split_bound_check(const FirstOrderBlid& h, double delta, double epsilon, int samples, std::uint64_t seed,
                              Eigen::Index dimension) {
  SplitReport r;
  r.delta = delta;
  r.epsilon = epsilon;
  Rng rng = make_stream(seed, "split-bound");
  for (int s = 0; s < samples; ++s) {
    const bool small = s % 2 == 0;
    // log-uniform |x / delta| in [1e-4 eps, eps) or [eps, 1e3)
    const double lo = small ? std::log(1e-4 * epsilon) : std::log(epsilon);
    const double hi = small ? std::log(epsilon) : std::log(1e3);
    const double u = std::exp(uniform(rng, lo, hi));
    const Vector x = delta * u * random_unit_vector(rng, dimension);
    const double ratio = sup(Vector(delta * h(Vector(x / delta)))) / sup(x);
    if (small)
      r.small_max = std::max(r.small_max, ratio);
    else
      r.large_max = std::max(r.large_max, ratio);
    if (u < h.identity_radius()) r.identity_max_error = std::max(r.identity_max_error, std::abs(ratio - 1.0));
  }
  r.m = std::max(h.c1, h.c0 / epsilon);
  r.m_empirical = std::max(r.small_max, r.large_max);
  r.pass = r.small_max <= h.c1 + 0.1 && r.large_max <= h.c0 / epsilon && r.m_empirical <= r.m &&
           r.identity_max_error <= 1e-12;
  return r;
}

std::vector<double> default_shells(double delta, int count) {
  std::vector<double> shells;
  for (int i = 0; i < count; ++i) shells.push_back(delta * std::pow(10.0, -2.0 + 4.0 * i / (count - 1)));
  return shells;
}

nlohmann::json to_json(const CutoffReport& r) {
  nlohmann::json witnesses = nlohmann::json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(vec(w));
  return {{"S1", r.S1},
          {"bound1", r.bound1},
          {"hypothesis1", r.hypothesis1},
          {"hypothesis1_holds", r.hypothesis1_holds},
          {"S2", r.S2},
          {"bound2", r.bound2},
          {"holder_observed", r.holder_observed},
          {"m", r.m},
          {"exterior_max_derivative", r.exterior_max_derivative},
          {"exterior_samples", r.exterior_samples},
          {"sup_cutoff", r.sup_cutoff},
          {"sup_local", r.sup_local},
          {"agreement_max_error", r.agreement_max_error},
          {"witnesses", witnesses},
          {"pass1", r.pass1},
          {"pass2", r.pass2},
          {"pass", r.pass},
          {"caveat", r.caveat}};
}

CutoffReport verify_76(const NonlinearPart& f, const FirstOrderBlid& h, const CutoffParams& params,
                       int directions_per_shell, std::uint64_t seed) {
  CutoffReport r;
  r.caveat =
      "sampled suprema are lower bounds of true suprema: a pass is evidence, a fail is a counterexample";
  const double delta = params.delta;
  const Eigen::Index d = f.dimension();
  const VectorMap ftilde = cutoff(f, h, delta);
  const VectorMap local = [&f](const Vector& y) { return f(y); };
  const double step = 1e-6 * delta;
  Rng rng = make_stream(seed, "verify76:" + f.name());

  // Hypotheses on the ball ||y|| <= delta c0.
  const double ball = delta * h.c0;
  for (int s = 0; s < 7 * directions_per_shell; ++s) {
    const double u = s % 5 == 0 ? 1.0 : uniform(rng, 0.0, 1.0);
    const Vector y = ball * u * random_unit_vector(rng, d);
    const double dnorm = sup_operator_norm(jacobian(local, y, step));
    r.hypothesis1 = std::max(r.hypothesis1, dnorm);
    if (sup(y) > 0.0) r.holder_observed = std::max(r.holder_observed, dnorm / std::pow(sup(y), params.alpha));
    r.sup_local = std::max(r.sup_local, sup(f(y)));
  }
  r.hypothesis1_holds = r.hypothesis1 <= params.delta_eta;

  Vector witness1 = Vector::Zero(d), witness2 = Vector::Zero(d);
  for (double shell : default_shells(delta)) {
    for (int s = 0; s < directions_per_shell; ++s) {
      const Vector x = shell * uniform(rng, 0.8, 1.25) * random_unit_vector(rng, d);
      const double dnorm = sup_operator_norm(jacobian(ftilde, x, step));
      if (dnorm > r.S1) {
        r.S1 = dnorm;
        witness1 = x;
      }
      const double ratio = dnorm / std::pow(sup(x), params.alpha);
      if (ratio > r.S2) {
        r.S2 = ratio;
        witness2 = x;
      }
      if (x.cwiseAbs().minCoeff() >= delta * h.outer_radius() * (1.0 + 1e-9)) {
        r.exterior_max_derivative = std::max(r.exterior_max_derivative, dnorm);
        ++r.exterior_samples;
      }
    }
  }
  r.witnesses = {witness1, witness2};

  for (int s = 0; s < 7 * directions_per_shell; ++s) {
    const double magnitude = std::exp(uniform(rng, std::log(1e-3 * delta), std::log(1e3 * delta)));
    const Vector x = magnitude * random_unit_vector(rng, d);
    r.sup_cutoff = std::max(r.sup_cutoff, sup(ftilde(x)));
    const Vector inner = uniform(rng, 0.0, 1.0) * delta * h.identity_radius() * random_unit_vector(rng, d);
    const Vector fx = f(inner);
    r.agreement_max_error = std::max(r.agreement_max_error, sup(ftilde(inner) - fx) / std::max(1.0, sup(fx)));
  }

  r.bound1 = params.delta_eta * h.c1;
  r.m = params.m > 0.0 ? params.m : std::max(h.c1, h.c0 / params.epsilon);
  r.bound2 = params.M * h.c1 * std::pow(r.m, params.alpha);
  r.pass1 = !r.hypothesis1_holds || r.S1 <= r.bound1;
  r.pass2 = r.S2 <= r.bound2;
  r.pass = r.pass1 && r.pass2 && r.exterior_max_derivative <= 1e-12 &&
           r.sup_cutoff <= r.sup_local * (1.0 + 1e-12) && r.agreement_max_error <= 1e-12;
  return r;
}

}  // namespace blidkit
