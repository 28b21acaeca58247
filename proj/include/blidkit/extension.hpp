#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blidkit/blid.hpp"
#include "blidkit/differentiability.hpp"
#include "blidkit/sampling.hpp"

namespace blidkit {

/// The blid's image is not contained in the germ's domain.
struct ExtensionImpossible : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Local map defined on the sup_norm ball of radius validity_radius, with
/// values in Scalar^m.
template <class Scalar>
struct Germ {
  using Value = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::string name;
  std::function<Value(const CqElement&)> local_map;
  double validity_radius = std::numeric_limits<double>::infinity();
  int declared_smoothness = std::numeric_limits<int>::max();
};

/// F = f o H, defined on the whole discretized space.
template <class Scalar>
class GlobalMap {
 public:
  using Value = typename Germ<Scalar>::Value;

  GlobalMap(Germ<Scalar> germ, BlidMap blid, double agreement_radius)
      : germ_(std::move(germ)), blid_(std::move(blid)), agreement_radius_(agreement_radius) {}

  Value operator()(const CqElement& x) const { return germ_.local_map(blid_(x)); }

  const Germ<Scalar>& germ() const { return germ_; }
  const BlidMap& blid() const { return blid_; }
  double agreement_radius() const { return agreement_radius_; }

 private:
  Germ<Scalar> germ_;
  BlidMap blid_;
  double agreement_radius_;
};

template <class Scalar>
GlobalMap<Scalar> extend(Germ<Scalar> f, BlidMap h) {
  const double image = h.image_bound();
  if (!(image < f.validity_radius))
    throw ExtensionImpossible("extend: blid image bound " + std::to_string(image) +
                              " is not inside the germ's validity radius " + std::to_string(f.validity_radius));
  const double radius = std::min(h.local_radius(), f.validity_radius);
  return GlobalMap<Scalar>(std::move(f), std::move(h), radius);
}

using RealGerm = Germ<double>;
using ComplexGerm = Germ<std::complex<double>>;
using RealGlobalMap = GlobalMap<double>;
using ComplexGlobalMap = GlobalMap<std::complex<double>>;

/// Rational integrand g(t, x) = N(t, x) / D(t, x) with monomial terms
/// c t^i x^j.
struct RationalIntegrand {
  struct Term {
    int t_power = 0;
    int x_power = 0;
    double coeff = 0.0;
  };
  std::vector<Term> numerator;
  std::vector<Term> denominator;

  double operator()(double t, double x) const;
  static RationalIntegrand from_json(const nlohmann::json& j);
};

/// x -> integral over the element's domain of g(t, x(t)) (Simpson).
RealGerm integral_germ(std::string name, RationalIntegrand g, double validity_radius);

/// Germs shipped with the toolkit: "example1" (integral of 1/(1 - x)),
/// "constant", "mean-square", "rational" (integrand from params).
RealGerm real_germ(const std::string& name, const nlohmann::json& params = {});
/// "complex-phase": integral of exp(i x(t)).
ComplexGerm complex_germ(const std::string& name, const nlohmann::json& params = {});

/// Builds a blid by kind name ("pointwise", "taylor-integral", "scaled").
BlidMap blid_by_name(const std::string& kind, const BumpFunction& bump, const nlohmann::json& params = {});

struct AgreementReport {
  double radius = 0.0;
  int samples = 0;
  double max_deviation = 0.0;
  bool pass = false;
};

nlohmann::json to_json(const AgreementReport& r);

template <class Scalar>
AgreementReport agreement_check(const GlobalMap<Scalar>& f, int samples, std::uint64_t seed, const GridInterval& grid,
                                double tolerance = 1e-12, std::optional<double> radius = std::nullopt) {
  AgreementReport r;
  r.radius = radius.value_or(f.agreement_radius());
  r.samples = samples;
  Rng rng = make_stream(seed, "agreement:" + f.germ().name);
  const int q = f.blid().level();
  for (int s = 0; s < samples; ++s) {
    const CqElement x = random_element_with_norm(rng, grid, q, r.radius * uniform(rng, 0.0, 1.0), s % 2 == 1);
    const auto diff = (f(x) - f.germ().local_map(x)).cwiseAbs().eval();
    if (diff.size() > 0) r.max_deviation = std::max(r.max_deviation, static_cast<double>(diff.maxCoeff()));
  }
  r.pass = r.max_deviation <= tolerance;
  return r;
}

struct BoundednessReport {
  struct Order {
    int order = 0;
    std::vector<double> stratum_sup;  // one per magnitude stratum
    double sup = 0.0;
    double growth_ratio = 0.0;  // max later stratum sup / first stratum sup
    bool bounded = false;
  };
  std::vector<double> magnitudes;
  std::vector<Order> orders;
  int samples = 0;
  bool pass = false;
};

nlohmann::json to_json(const BoundednessReport& r);

/// Magnitudes at which boundedness is probed.
inline const std::vector<double> kBoundednessMagnitudes = {1.0, 10.0, 100.0, 1000.0};

/// Samples |F| (order 0) and directional derivatives of the listed orders over
/// elements of growing sup_norm. An order passes when no later stratum exceeds
/// the first by more than 10%.
template <class Scalar>
BoundednessReport boundedness_check(const GlobalMap<Scalar>& f, const std::vector<int>& derivative_orders, int samples,
                                    std::uint64_t seed, const GridInterval& grid) {
  BoundednessReport r;
  r.magnitudes = kBoundednessMagnitudes;
  r.samples = samples;
  const int q = f.blid().level();
  const std::vector<Vector> directions = standard_directions(grid, q);
  const CqElement prototype = CqElement::zero(q, grid);
  for (int order : derivative_orders) {
    BoundednessReport::Order o;
    o.order = order;
    Rng rng = make_stream(seed, "boundedness:" + f.germ().name + ":" + std::to_string(order));
    for (double magnitude : r.magnitudes) {
      double best = 0.0;
      const int per_stratum = std::max(1, samples / static_cast<int>(r.magnitudes.size()));
      for (int s = 0; s < per_stratum; ++s) {
        const CqElement x = random_element_with_norm(rng, grid, q, magnitude, s % 2 == 1);
        double value = 0.0;
        if (order == 0) {
          value = static_cast<double>(f(x).cwiseAbs().maxCoeff());
        } else {
          const Vector& v = directions[static_cast<std::size_t>(s) % directions.size()];
          const Vector base = x.coordinates();
          auto along = [&](double t) {
            using Value = typename GlobalMap<Scalar>::Value;
            Value out = f(prototype.with_coordinates(base + t * v));
            return out;
          };
          const auto d = derivative_at_zero(along, order, default_fd_step(order, 0.1));
          value = static_cast<double>(d.cwiseAbs().maxCoeff());
        }
        best = std::max(best, value);
      }
      o.stratum_sup.push_back(best);
      o.sup = std::max(o.sup, best);
    }
    const double first = o.stratum_sup.front();
    const double later = *std::max_element(o.stratum_sup.begin() + 1, o.stratum_sup.end());
    o.growth_ratio = first > 0.0 ? later / first : (later > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    o.bounded = o.growth_ratio <= 1.1;
    r.orders.push_back(o);
  }
  r.pass = std::all_of(r.orders.begin(), r.orders.end(), [](const auto& o) { return o.bounded; });
  return r;
}

}  // namespace blidkit
