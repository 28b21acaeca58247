#include <doctest.h>

#include <cmath>

#include "blidkit/differentiability.hpp"
#include "blidkit/jets.hpp"

using namespace blidkit;

namespace {

Vector point(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_CASE("multi-indices") {
  const auto b = multi_indices(2, 2);
  REQUIRE(b.size() == 3);
  CHECK(b[0] == MultiIndex{2, 0});
  CHECK(b[1] == MultiIndex{1, 1});
  CHECK(b[2] == MultiIndex{0, 2});
  CHECK(multi_index_count(3, 4) == 15);
  CHECK(multi_indices(3, 4).size() == 15);
  CHECK(parse_multi_index("(1, 2)") == MultiIndex{1, 2});
  CHECK(to_string(MultiIndex{3}) == "(3)");
  CHECK_THROWS(parse_multi_index("(a)"));
}

TEST_CASE("homogeneous polynomials") {
  HomPoly<double> sq(1, 2);
  sq.coeffs()[0] = 1.0;
  CHECK(sq(point({3.0})) == 9.0);

  HomPoly<double> cube(2, 3);
  cube.coeffs() << 1.0, -2.0, 0.5, 3.0;
  const Vector x = point({0.7, -1.3});
  CHECK(cube(Vector(2.0 * x)) == doctest::Approx(8.0 * cube(x)));

  HomPoly<double> p(2, 2);
  p.coeff({2, 0}) = 2.0;
  p.coeff({1, 1}) = 1.0;
  CHECK(p(point({1.0, 2.0})) == 4.0);

  HomPoly<double> plus(2, 1), minus(2, 1);
  plus.coeffs() << 1.0, 1.0;
  minus.coeffs() << 1.0, -1.0;
  const HomPoly<double> prod = plus * minus;
  CHECK(prod.coeff({2, 0}) == 1.0);
  CHECK(prod.coeff({1, 1}) == 0.0);
  CHECK(prod.coeff({0, 2}) == -1.0);
  CHECK_THROWS(p(point({1.0})));
}

TEST_CASE("jet sequences and JSON") {
  const auto j = nlohmann::json::parse(
      R"j({"dimension": 2, "entries": [{"degree": 1, "coefficients": {"(1,0)": 1.5}},
                                      {"degree": 2, "coefficients": {"(1,1)": 2.0}}]})j");
  const RealJets jets = real_jets_from_json(j);
  CHECK(jets.truncation() == 2);
  CHECK(jets[2].coeff({1, 1}) == 2.0);
  // 1.5 x + 2xy / 2
  CHECK(jets.taylor(point({2.0, 3.0})) == doctest::Approx(3.0 + 6.0));
  const RealJets back = real_jets_from_json(to_json(jets));
  CHECK(back[1].coeffs() == jets[1].coeffs());
  const auto bad = nlohmann::json::parse(R"j({"dimension": 2, "entries": [{"degree": 2, "coefficients": {"(1,0)": 1}}]})j");
  CHECK_THROWS(real_jets_from_json(bad));
  const ComplexJets cj = complex_jets_from_json(nlohmann::json::parse(
      R"j({"dimension": 1, "entries": [{"degree": 1, "coefficients": {"(1)": [0, 1]}}]})j"));
  CHECK(cj[1].coeffs()[0] == std::complex<double>(0.0, 1.0));
}

TEST_CASE("Borel realization") {
  SUBCASE("zero jets give zero") {
    const BorelRealization f = borel_realize(RealJets(1, 4));
    for (double x : {-100.0, -0.1, 0.0, 0.2, 50.0}) CHECK(f(point({x})) == 0.0);
  }
  SUBCASE("identity jet") {
    RealJets jets(1, 1);
    jets[1].coeffs()[0] = 1.0;
    const BorelRealization f = borel_realize(jets);
    CHECK(f(point({0.0})) == 0.0);
    const double d = derivative_at_zero([&](double t) { return f(point({t})); }, 1, default_fd_step(1, f.identity_radius()));
    CHECK(std::abs(d - 1.0) <= 1e-8);
  }
  SUBCASE("jets of 1/(1-x)") {
    RealJets jets(1, 5);
    for (int k = 0; k <= 5; ++k) jets[k].coeffs()[0] = factorial(k);
    const BorelRealization f = borel_realize(jets);
    const JetReport r = jet_verify([&](const Vector& x) { return f(x); }, jets, {point({1.0})}, f.identity_radius());
    CHECK(r.pass);
    for (const auto& c : r.checks) CHECK(c.error <= (c.degree <= 4 ? 1e-3 : 1e-2));
    double sup = 0.0;
    for (int i = 0; i <= 20000; ++i) sup = std::max(sup, std::abs(f(point({-100.0 + 0.01 * i}))));
    CHECK(sup <= 1.0 + 0.5 + 0.25 + 0.125 + 0.0625 + 0.03125);
    CHECK(f.global_bound() <= 1.0 + 0.96875);
  }
  SUBCASE("linear map has vanishing higher derivatives") {
    RealJets jets(2, 3);
    jets[1].coeffs() << 2.0, -1.0;
    const BorelRealization f = borel_realize(jets);
    CHECK(jet_verify([&](const Vector& x) { return f(x); }, jets, {point({1.0, 0.5}), point({-0.3, 1.0})},
                     f.identity_radius())
              .pass);
  }
  SUBCASE("large coefficients get small scales") {
    RealJets jets(1, 2);
    jets[2].coeffs()[0] = 1e6;
    const BorelRealization f = borel_realize(jets);
    CHECK(f.scales()[2] < 1e-2);
    double sup = 0.0;
    for (int i = 0; i <= 2000; ++i) sup = std::max(sup, std::abs(f(point({-1.0 + 0.001 * i}))));
    CHECK(sup <= 0.25);
  }
}
