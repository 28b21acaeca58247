#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "blidkit/bump.hpp"
#include "blidkit/function_space.hpp"

namespace blidkit {

using MultiIndex = std::vector<int>;

/// All alpha with |alpha| = n in d variables, graded-lex order
/// (x^2, xy, y^2 for d = 2, n = 2).
std::vector<MultiIndex> multi_indices(int d, int n);

/// C(n + d - 1, d - 1).
std::size_t multi_index_count(int d, int n);

std::string to_string(const MultiIndex& alpha);
/// Parses "(2,0)" / "2,0" / "(3)".
MultiIndex parse_multi_index(const std::string& s);

inline double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

/// Homogeneous polynomial sum_alpha c_alpha x^alpha of degree n in d
/// variables; coefficients follow multi_indices(d, n).
template <class Scalar>
class HomPoly {
 public:
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  HomPoly(int dimension, int degree)
      : dimension_(dimension), degree_(degree), basis_(multi_indices(dimension, degree)),
        coeffs_(Coeffs::Zero(static_cast<Eigen::Index>(basis_.size()))) {}

  HomPoly(int dimension, int degree, Coeffs coeffs) : HomPoly(dimension, degree) {
    if (coeffs.size() != coeffs_.size()) throw ShapeMismatch("HomPoly: coefficient count does not match basis");
    coeffs_ = std::move(coeffs);
  }

  int dimension() const { return dimension_; }
  int degree() const { return degree_; }
  const std::vector<MultiIndex>& basis() const { return basis_; }
  const Coeffs& coeffs() const { return coeffs_; }
  Coeffs& coeffs() { return coeffs_; }

  Eigen::Index index_of(const MultiIndex& alpha) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] == alpha) return static_cast<Eigen::Index>(i);
    throw std::out_of_range("HomPoly: multi-index " + to_string(alpha) + " is not of degree " +
                            std::to_string(degree_) + " in " + std::to_string(dimension_) + " variables");
  }
  Scalar coeff(const MultiIndex& alpha) const { return coeffs_[index_of(alpha)]; }
  Scalar& coeff(const MultiIndex& alpha) { return coeffs_[index_of(alpha)]; }

  template <class Point>
  auto operator()(const Point& x) const {
    using Arg = typename Point::Scalar;
    using Result = decltype(Scalar{} * Arg{});
    if (x.size() != dimension_)
      throw ShapeMismatch("HomPoly: point has dimension " + std::to_string(x.size()) + ", expected " +
                          std::to_string(dimension_));
    Result total{};
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      Arg monomial{1};
      for (int k = 0; k < dimension_; ++k)
        for (int p = 0; p < basis_[i][static_cast<std::size_t>(k)]; ++p) monomial *= x[k];
      total += coeffs_[static_cast<Eigen::Index>(i)] * monomial;
    }
    return total;
  }

  /// Sum of |c_alpha|: bounds |P| on the unit sup-norm ball (exact for d = 1).
  double coefficient_norm() const { return coeffs_.cwiseAbs().sum(); }

 private:
  int dimension_;
  int degree_;
  std::vector<MultiIndex> basis_;
  Coeffs coeffs_;
};

template <class Scalar>
HomPoly<Scalar> operator*(const HomPoly<Scalar>& a, const HomPoly<Scalar>& b) {
  if (a.dimension() != b.dimension()) throw ShapeMismatch("HomPoly product: dimension mismatch");
  HomPoly<Scalar> out(a.dimension(), a.degree() + b.degree());
  for (std::size_t i = 0; i < a.basis().size(); ++i) {
    if (a.coeffs()[static_cast<Eigen::Index>(i)] == Scalar{}) continue;
    for (std::size_t j = 0; j < b.basis().size(); ++j) {
      MultiIndex alpha = a.basis()[i];
      for (std::size_t k = 0; k < alpha.size(); ++k) alpha[k] += b.basis()[j][k];
      out.coeff(alpha) += a.coeffs()[static_cast<Eigen::Index>(i)] * b.coeffs()[static_cast<Eigen::Index>(j)];
    }
  }
  return out;
}

/// Sequence P_0..P_m with P_j = f^(j)(0)(x)^j, so that the realized Taylor
/// polynomial is sum_j P_j(x) / j!.
template <class Scalar>
class JetSequence {
 public:
  explicit JetSequence(int dimension, int truncation) : dimension_(dimension) {
    for (int j = 0; j <= truncation; ++j) entries_.emplace_back(dimension, j);
  }

  int dimension() const { return dimension_; }
  int truncation() const { return static_cast<int>(entries_.size()) - 1; }
  const HomPoly<Scalar>& operator[](int j) const { return entries_[static_cast<std::size_t>(j)]; }
  HomPoly<Scalar>& operator[](int j) { return entries_[static_cast<std::size_t>(j)]; }

  /// sum_j P_j(x) / j!
  template <class Point>
  auto taylor(const Point& x) const {
    decltype(entries_[0](x)) total{};
    for (int j = 0; j <= truncation(); ++j) total += entries_[static_cast<std::size_t>(j)](x) / factorial(j);
    return total;
  }

 private:
  int dimension_;
  std::vector<HomPoly<Scalar>> entries_;
};

using RealJets = JetSequence<double>;
using ComplexJets = JetSequence<std::complex<double>>;

/// {dimension, entries: [{degree, coefficients: {"(alpha)": c}}]}; complex
/// coefficients may be written as [re, im].
RealJets real_jets_from_json(const nlohmann::json& j);
ComplexJets complex_jets_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RealJets& jets);
nlohmann::json to_json(const ComplexJets& jets);

/// f(x) = sum_{j<=m} P_j(eps_j H(x / eps_j)) / j! with the coordinate blid H
/// and eps_j the largest scale 2^i (i <= 10) such that the j-th term is
/// bounded by 2^-j everywhere.
class BorelRealization {
 public:
  BorelRealization(RealJets jets, BumpFunction bump);

  double operator()(const Vector& x) const;

  const RealJets& jets() const { return jets_; }
  const std::vector<double>& scales() const { return scales_; }
  /// Radius of the sup-norm ball on which every damped term is undamped.
  double identity_radius() const { return identity_radius_; }
  /// |P_0| + sum_{j>=1} (bound of term j).
  double global_bound() const { return global_bound_; }

 private:
  RealJets jets_;
  BumpFunction bump_;
  std::vector<double> scales_;
  double identity_radius_ = 0.0;
  double global_bound_ = 0.0;
};

/// Admissible scale could not be found on the ladder.
struct ScaleNotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

BorelRealization borel_realize(const RealJets& jets, const BumpFunction& bump = {});

struct JetCheck {
  int degree = 0;
  int direction = 0;
  double estimate = 0.0;
  double expected = 0.0;
  double error = 0.0;  // relative, or absolute when expected == 0
  double tolerance = 0.0;
  bool pass = false;
};

struct JetReport {
  std::vector<JetCheck> checks;
  bool pass = false;
  std::string caveat;
};

nlohmann::json to_json(const JetReport& r);

/// Relative tolerance for the finite-difference estimate of order j.
double jet_tolerance(int degree);

/// Compares the j-th derivative at 0 of t -> f(t v), estimated by central
/// differences with Richardson extrapolation, against P_j(v). `scale` bounds
/// the stencil reach and should not exceed the realization's identity radius.
JetReport jet_verify(const std::function<double(const Vector&)>& f, const RealJets& jets,
                     const std::vector<Vector>& directions, double scale = 1.0);

}  // namespace blidkit
