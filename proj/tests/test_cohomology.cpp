#include <doctest.h>

#include <algorithm>

#include "blidkit/cohomology.hpp"
#include "blidkit/sampling.hpp"

using namespace blidkit;

namespace {

LinearAuto diag(double a, double b) {
  Eigen::MatrixXd m(2, 2);
  m << a, 0.0, 0.0, b;
  return LinearAuto(m);
}

LinearAuto scalar(double a) { return LinearAuto(Eigen::MatrixXd::Constant(1, 1, a)); }

}  // namespace

TEST_CASE("composition operator") {
  CHECK(build_Ln(scalar(2.0), 3).matrix(0, 0) == 8.0);
  const Eigen::MatrixXd id = build_Ln(LinearAuto(Eigen::MatrixXd::Identity(3, 3)), 3).matrix;
  CHECK(id.isIdentity(0.0));
  const Eigen::MatrixXd l2 = build_Ln(diag(2.0, 0.5), 2).matrix;
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected.diagonal() << 4.0, 1.0, 0.25;
  CHECK((l2 - expected).cwiseAbs().maxCoeff() == 0.0);

  // (x + y) o A for A = [[1, 1], [0, 1]]: x -> x + y, y -> y
  Eigen::MatrixXd shear(2, 2);
  shear << 1.0, 1.0, 0.0, 1.0;
  const Eigen::MatrixXd l1 = build_Ln(LinearAuto(shear), 1).matrix;
  CHECK(l1(0, 0) == 1.0);
  CHECK(l1(1, 0) == 1.0);
  CHECK(l1(1, 1) == 1.0);
  CHECK_THROWS(LinearAuto(Eigen::MatrixXd::Zero(2, 2)));
}

TEST_CASE("degree-wise solver") {
  HomPoly<double> p1(1, 1), p2(1, 2);
  p1.coeffs()[0] = 1.0;
  p2.coeffs()[0] = 1.0;
  CHECK(std::abs(solve_order(scalar(2.0), 1, p1).coeffs()[0] - 1.0) <= 1e-12);
  CHECK(std::abs(solve_order(scalar(2.0), 2, p2).coeffs()[0] - 1.0 / 3.0) <= 1e-12);

  HomPoly<double> xy(2, 2);
  xy.coeff({1, 1}) = 1.0;
  try {
    solve_order(diag(2.0, 0.5), 2, xy);
    FAIL("expected Unsolvable");
  } catch (const Unsolvable& e) {
    CHECK(e.degree() == 2);
    CHECK(std::find(e.resonant().begin(), e.resonant().end(), MultiIndex{1, 1}) != e.resonant().end());
  }
  // resonant but the right-hand side avoids the resonant direction
  HomPoly<double> x2(2, 2);
  x2.coeff({2, 0}) = 3.0;
  const HomPoly<double> q = solve_order(diag(2.0, 0.5), 2, x2);
  CHECK(q.coeff({2, 0}) == doctest::Approx(1.0));
  CHECK(q.coeff({1, 1}) == doctest::Approx(0.0));
}

TEST_CASE("truncated solution") {
  RealJets f(1, 2);
  f[1].coeffs()[0] = 1.0;
  f[2].coeffs()[0] = 2.0;
  const TruncatedSolution<double> sol = solve_truncated(scalar(2.0), f);
  // g = x + x^2 / 3 = Q_1 + Q_2 / 2!
  CHECK(sol.q[1].coeffs()[0] == doctest::Approx(1.0));
  CHECK(sol.q[2].coeffs()[0] / 2.0 == doctest::Approx(1.0 / 3.0));
  CHECK(sol.coefficient_residual <= 1e-12);
  CHECK(sol.hyperbolic);

  RealJets resonant(2, 2);
  resonant[2].coeff({1, 1}) = 2.0;
  CHECK_THROWS_AS(solve_truncated(diag(2.0, 0.5), resonant), Unsolvable);

  ComplexJets cf(1, 1);
  cf[1].coeffs()[0] = {0.0, 1.0};
  const auto csol = solve_truncated(scalar(3.0), cf);
  CHECK(std::abs(csol.q[1].coeffs()[0] - std::complex<double>(0.0, 0.5)) <= 1e-15);
  CHECK_FALSE(solve_truncated(scalar(-1.0), RealJets(1, 1)).hyperbolic);
}

TEST_CASE("eigenvalue law") {
  CHECK(eigenvalue_law_error(diag(2.0, 0.5), 3) <= 1e-12);
  Rng rng = make_stream(8, "law");
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 3;
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = uniform(rng, -1.0, 1.0) + (i == j ? 1.5 : 0.0);
    CHECK(eigenvalue_law_error(LinearAuto(a), 1 + trial % 4) <= 1e-6);
  }
  const Eigen::VectorXcd mu = eigenvalue_products(diag(2.0, 0.5), 2);
  CHECK(mu[1] == std::complex<double>(1.0, 0.0));
  CHECK(resonances(diag(2.0, 0.5), 2) == std::vector<MultiIndex>{{1, 1}});
}

TEST_CASE("residual order") {
  RealJets f(1, 3);
  f[1].coeffs()[0] = 1.0;
  f[2].coeffs()[0] = 2.0;
  f[3].coeffs()[0] = 6.0;
  const std::function<double(const Vector&)> fx = [&f](const Vector& x) { return f.taylor(x); };
  RealJets f2(1, 2);
  f2[1] = f[1];
  f2[2] = f[2];
  const LinearAuto a = scalar(2.0);
  const ResidualOrderReport r = residual_order_check<double>(solve_truncated(a, f2).q, a, fx, 2, 3, 10, 5);
  CHECK(r.pass);
  CHECK(r.min_slope == doctest::Approx(3.0).epsilon(0.05));
  CHECK(r.dispersion <= 0.3);

  const ResidualOrderReport exact = residual_order_check<double>(solve_truncated(a, f).q, a, fx, 3, 3, 4, 5);
  CHECK(exact.polynomial_case);
  CHECK(exact.max_residual <= 1e-12);
  CHECK(exact.pass);
}

TEST_CASE("matrix JSON") {
  CHECK(linear_auto_from_json(nlohmann::json::parse("[[2.0]]")).dimension() == 1);
  CHECK(linear_auto_from_json(nlohmann::json::parse(R"({"matrix": [[2, 0], [0, 3]]})")).eigenvalues()[1].real() == 3.0);
  CHECK_THROWS(linear_auto_from_json(nlohmann::json::parse("[[1, 2], [3]]")));
}
