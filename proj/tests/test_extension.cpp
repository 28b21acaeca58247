#include <doctest.h>

#include <cmath>

#include "blidkit/extension.hpp"

using namespace blidkit;

namespace {

const GridInterval kUnit(0.0, 1.0, 1025);
constexpr double kFourLogFourThirds = 1.1507282898071237098;
// 1 / (1 - a) for the default bump
constexpr double kExample1Bound = 1.5592632995720743436;

CqElement fn(double (*f)(double)) { return CqElement::from_function(kUnit, f); }

}  // namespace

TEST_CASE("integral germ of 1/(1-x) extended by the pointwise blid") {
  const RealGlobalMap F = extend(real_germ("example1"), BlidMap::pointwise(BumpFunction()));
  CHECK(F.agreement_radius() == doctest::Approx(1.0 / 3.0));
  CHECK(F(CqElement::zero(0, kUnit))[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(F(fn([](double) { return 2.0; }))[0] == 1.0);
  CHECK(std::abs(F(fn([](double t) { return t / 4.0; }))[0] - kFourLogFourThirds) <= 1e-8);

  const CqElement mid = fn([](double) { return 0.45; });
  CHECK(std::abs(F(mid)[0] - F.germ().local_map(mid)[0]) > 1e-3);

  const AgreementReport a = agreement_check(F, 100, 42, kUnit, 1e-12, 0.3);
  CHECK(a.pass);
  CHECK(a.max_deviation <= 1e-12);

  const BoundednessReport b = boundedness_check(F, {0, 1}, 200, 42, kUnit);
  CHECK(b.pass);
  CHECK(b.orders[0].sup <= kExample1Bound + 1e-9);
  CHECK(b.orders[0].sup <= 2.0);
}

TEST_CASE("constant germ") {
  const RealGlobalMap F = extend(real_germ("constant", {{"value", 3.5}}), BlidMap::pointwise(BumpFunction()));
  const BoundednessReport b = boundedness_check(F, {0, 1, 2}, 40, 1, GridInterval(0.0, 1.0, 65));
  CHECK(b.orders[0].sup == 3.5);
  CHECK(b.orders[1].sup == 0.0);
  CHECK(b.orders[2].sup == 0.0);
}

TEST_CASE("extension needs the blid image inside the germ's domain") {
  RationalIntegrand g{{{0, 0, 1.0}}, {{0, 0, 1.0}, {0, 1, -1.0}}};
  CHECK_THROWS_AS(extend(integral_germ("narrow", g, 0.3), BlidMap::pointwise(BumpFunction())), ExtensionImpossible);
  CHECK_NOTHROW(extend(integral_germ("wide", g, 0.4), BlidMap::pointwise(BumpFunction())));
}

TEST_CASE("complex-valued germ") {
  const ComplexGlobalMap F = extend(complex_germ("complex-phase"), BlidMap::pointwise(BumpFunction()));
  const auto v = F(fn([](double) { return 0.2; }));
  CHECK(v[0].real() == doctest::Approx(std::cos(0.2)).epsilon(1e-14));
  CHECK(v[0].imag() == doctest::Approx(std::sin(0.2)).epsilon(1e-14));
  CHECK(agreement_check(F, 50, 3, kUnit).pass);
}

TEST_CASE("rational integrand from JSON") {
  const auto j = nlohmann::json::parse(R"({"numerator": [[1, 0, 1.0]], "denominator": [[0, 0, 1.0]]})");
  const RationalIntegrand g = RationalIntegrand::from_json(j);
  CHECK(g(0.5, 7.0) == doctest::Approx(0.5));
  const RealGerm germ = real_germ("rational", j);
  CHECK(germ.local_map(CqElement::zero(0, kUnit))[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("blids by name") {
  const BumpFunction h;
  CHECK(blid_by_name("pointwise", h).kind() == BlidMap::Kind::Pointwise);
  CHECK(blid_by_name("taylor-integral", h, {{"level", 2}}).level() == 2);
  CHECK(blid_by_name("scaled", h, {{"c", 0.1}}).level() == 5);
  CHECK_THROWS(blid_by_name("unknown", h));
}
