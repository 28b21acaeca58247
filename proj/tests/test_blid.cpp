#include <doctest.h>

#include <cmath>

#include "blidkit/blid.hpp"
#include "blidkit/sampling.hpp"

using namespace blidkit;

namespace {

const GridInterval kUnit(0.0, 1.0, 1025);

CqElement constant(double c) { return CqElement::from_function(kUnit, [c](double) { return c; }); }

}  // namespace

TEST_CASE("pointwise blid") {
  const BumpFunction h;
  CHECK(blid_pointwise(h, constant(0.2)).top() == constant(0.2).top());
  CHECK(blid_pointwise(h, constant(0.7)).top().cwiseAbs().maxCoeff() == 0.0);
  const CqElement t = CqElement::from_function(kUnit, [](double s) { return s; });
  const CqElement out = blid_pointwise(h, t);
  const auto i = static_cast<Eigen::Index>(kUnit.nearest_index(0.2));
  CHECK(out.top()[i] == t.top()[i]);
  CHECK(out.top()[static_cast<Eigen::Index>(kUnit.nearest_index(0.6))] == 0.0);
  CHECK_THROWS_AS(blid_pointwise(h, CqElement::zero(1, kUnit)), WrongSpace);
}

TEST_CASE("Taylor-integral blid") {
  const BumpFunction h;
  SUBCASE("small constant is fixed") {
    const CqElement x(1, kUnit, Vector::Constant(1, 0.1), Vector::Zero(1025));
    const CqElement y = blid_taylor_integral(h, x, 1);
    CHECK((reconstruct_derivative(y, 0) - reconstruct_derivative(x, 0)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("steep line is killed") {
    const CqElement x(1, kUnit, Vector::Zero(1), Vector::Constant(1025, 2.0));
    CHECK(sup_norm(blid_taylor_integral(h, x, 1)) == 0.0);
  }
  SUBCASE("gentle line is fixed") {
    const CqElement x(1, kUnit, Vector::Constant(1, 0.2), Vector::Constant(1025, 0.1));
    const CqElement y = blid_taylor_integral(h, x, 1);
    CHECK((reconstruct_derivative(y, 0) - reconstruct_derivative(x, 0)).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("seminorm bound a e^k") {
  const BumpFunction h;
  for (int k = 0; k <= 3; ++k) {
    const BlidMap hk = BlidMap::taylor_integral(h, k);
    CHECK(seminorm(hk(CqElement::zero(k, kUnit)), k, SeminormFamily::cinf_interval()) == 0.0);
    const BoundCertificate cert = blid_bound_certificate(hk, k, k == 3 ? 1000 : 200, 11);
    CHECK(cert.pass);
    CHECK(cert.bound == doctest::Approx(h.sup_hu() * std::exp(k)));
    CHECK(cert.observed_max < cert.bound);
  }
  const BoundCertificate pw = blid_bound_certificate(BlidMap::pointwise(h), 0, 200, 11);
  CHECK(pw.observed_max <= h.sup_hu());
  CHECK_THROWS_AS(blid_bound_certificate(BlidMap::taylor_integral(h, 2), 1, 10, 1), OrderOutOfRange);
}

TEST_CASE("scaled blid") {
  CHECK(minimal_scaled_level(0.5) == 3);
  CHECK(minimal_scaled_level(0.1) == 5);
  CHECK(minimal_scaled_level(0.01) == 8);
  const BumpFunction h;
  const FrechetMetric m{SeminormFamily::cinf_interval(), 40};
  for (double c : {0.5, 0.1}) {
    const BlidMap hc = blid_scaled(c, h);
    CHECK(certify_containment(hc, m, kUnit, 100, 21).pass);
    CHECK(certify_local_identity(hc, kUnit, 50, 21).pass);
  }
  CHECK_THROWS_AS(blid_scaled(1e-6, h, SeminormFamily::cinf_interval(), 10), ConfigurationError);
}

TEST_CASE("segment blid") {
  auto y = [](double t) { return 0.3 * t; };
  const PlaneBump band([y](double t) { return y(t) - 0.1; }, [y](double t) { return y(t) + 0.1; }, 0.2);
  const CqElement anchor = CqElement::from_function(kUnit, y);
  const BlidMap h = BlidMap::segment(anchor, band);

  const CqElement inside = CqElement::from_function(kUnit, [y](double t) { return y(t) + 0.05 * std::sin(9.0 * t); });
  CHECK((h(inside).top() - inside.top()).cwiseAbs().maxCoeff() == 0.0);

  const CqElement far = CqElement::from_function(kUnit, [y](double t) { return y(t) + 5.0; });
  CHECK((h(far).top() - anchor.top()).cwiseAbs().maxCoeff() == 0.0);

  const CqElement mixed = CqElement::from_function(kUnit, [y](double t) { return y(t) + 4.0 * std::sin(7.0 * t); });
  const Vector out = h(mixed).top();
  for (std::size_t i = 0; i < kUnit.size(); ++i) {
    const double t = kUnit.point(i);
    CHECK(band.distance(t, out[static_cast<Eigen::Index>(i)]) <= band.margin() + 1e-15);
  }
}

TEST_CASE("projected blid") {
  const BumpFunction h;
  const BlidMap pw = BlidMap::pointwise(h);
  Rng rng = make_stream(4, "projected");
  const CqElement x = random_rough_element(rng, kUnit, 0, 2.0);
  CHECK(blid_projected(Projector::identity(), pw, ProjectorSide::Image, x).top() == pw(x).top());
  CHECK(blid_projected(Projector::zero(), pw, ProjectorSide::Kernel, x).top() == pw(x).top());

  const GridInterval sym(-1.0, 1.0, 1025);
  const CqElement even = CqElement::from_function(sym, [](double t) { return 0.2 * std::cos(3.0 * t); });
  const CqElement out = blid_projected(Projector::even_part(), pw, ProjectorSide::Image, even);
  CHECK((out.top() - even.top()).cwiseAbs().maxCoeff() <= 1e-15);
  const CqElement odd = CqElement::from_function(sym, [](double t) { return 0.2 * t; });
  CHECK_THROWS_AS(blid_projected(Projector::even_part(), pw, ProjectorSide::Image, odd), SubspaceMembership);
  CHECK(idempotency_defect(Projector::even_part(), sym, 20, 3) <= 1e-15);
}

TEST_CASE("local identity certificate") {
  const IdentityReport r = certify_local_identity(BlidMap::pointwise(BumpFunction()), kUnit, 200, 42, 1.0 / 3.0);
  CHECK(r.pass);
  CHECK(r.max_error == 0.0);
}
