#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "blidkit/jets.hpp"

namespace blidkit {

/// Invertible linear map A of R^d with its spectrum.
class LinearAuto {
 public:
  explicit LinearAuto(Eigen::MatrixXd matrix);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::Index dimension() const { return matrix_.rows(); }
  /// Eigenvalues; for (numerically) diagonal matrices these are the
  /// diagonal entries in coordinate order.
  const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }
  /// No eigenvalue with |lambda| within 1e-9 of 1.
  bool hyperbolic() const { return hyperbolic_; }

  Vector operator()(const Vector& x) const { return matrix_ * x; }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::VectorXcd eigenvalues_;
  bool hyperbolic_ = false;
};

LinearAuto linear_auto_from_json(const nlohmann::json& j);

/// Matrix of Q -> Q o A on degree-n homogeneous polynomials in the
/// multi_indices(d, n) basis.
struct CompositionOperator {
  int degree = 0;
  Eigen::MatrixXd matrix;
};

CompositionOperator build_Ln(const LinearAuto& a, int n);

/// prod_i lambda_i^alpha_i for every |alpha| = n, in basis order.
Eigen::VectorXcd eigenvalue_products(const LinearAuto& a, int n);

/// Multi-indices with |lambda^alpha - 1| < 1e-7.
std::vector<MultiIndex> resonances(const LinearAuto& a, int n);

/// Largest distance between the spectrum of L_n and the predicted products
/// after nearest-neighbour matching, relative to max(1, |mu|).
double eigenvalue_law_error(const LinearAuto& a, int n);

/// (L_n - id) Q = P has no solution.
class Unsolvable : public std::runtime_error {
 public:
  Unsolvable(int degree, std::vector<MultiIndex> resonant, double residual);
  int degree() const { return degree_; }
  const std::vector<MultiIndex>& resonant() const { return resonant_; }
  double residual() const { return residual_; }

 private:
  int degree_;
  std::vector<MultiIndex> resonant_;
  double residual_;
};

/// Relative threshold on singular values below which L_n - id is singular.
inline constexpr double kSingularThreshold = 1e-9;

/// Solves (L_n - id) Q = P. When L_n - id is singular the minimum-norm
/// least-squares solution is returned if it satisfies the equation to
/// 1e-9 ||P||; otherwise Unsolvable lists the resonant multi-indices.
template <class Scalar>
HomPoly<Scalar> solve_order(const LinearAuto& a, int n, const HomPoly<Scalar>& p) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (p.degree() != n || p.dimension() != a.dimension())
    throw ShapeMismatch("solve_order: polynomial must be homogeneous of degree " + std::to_string(n) +
                        " in dimension " + std::to_string(a.dimension()));
  const Eigen::MatrixXd shifted = build_Ln(a, n).matrix - Eigen::MatrixXd::Identity(p.coeffs().size(), p.coeffs().size());
  const Mat system = shifted.cast<Scalar>();
  Eigen::JacobiSVD<Mat> svd(system, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const bool singular = sv.size() > 0 && sv.minCoeff() < kSingularThreshold * std::max(sv.maxCoeff(), 1e-300);
  svd.setThreshold(kSingularThreshold);
  HomPoly<Scalar> q(p.dimension(), n);
  if (p.coeffs().size() > 0) q.coeffs() = svd.solve(p.coeffs());
  const double residual = (system * q.coeffs() - p.coeffs()).norm();
  if (singular && residual > kSingularThreshold * std::max(p.coeffs().norm(), 1e-300))
    throw Unsolvable(n, resonances(a, n), residual);
  return q;
}

template <class Scalar>
struct TruncatedSolution {
  JetSequence<Scalar> q;                 // Q_0 = 0, Q_1..Q_m
  bool hyperbolic = true;                // false: warning, A is not hyperbolic
  double coefficient_residual = 0.0;     // max over n of |(L_n - id) Q_n - P_n|
  std::vector<std::vector<MultiIndex>> resonances;  // per degree, informational
};

/// Solves every degree 1..m of the jet sequence of f; g_m = sum Q_n / n!
/// satisfies g_m(Ax) - g_m(x) = f_m(x) coefficient-wise.
template <class Scalar>
TruncatedSolution<Scalar> solve_truncated(const LinearAuto& a, const JetSequence<Scalar>& f) {
  if (f.dimension() != a.dimension()) throw ShapeMismatch("solve_truncated: dimension mismatch");
  TruncatedSolution<Scalar> out{JetSequence<Scalar>(f.dimension(), f.truncation()), a.hyperbolic(), 0.0, {}};
  out.resonances.resize(static_cast<std::size_t>(f.truncation() + 1));
  for (int n = 1; n <= f.truncation(); ++n) {
    out.q[n] = solve_order(a, n, f[n]);
    out.resonances[static_cast<std::size_t>(n)] = resonances(a, n);
    const Eigen::MatrixXd ln = build_Ln(a, n).matrix;
    const auto lhs = (ln.cast<Scalar>() * out.q[n].coeffs() - out.q[n].coeffs() - f[n].coeffs()).eval();
    if (lhs.size() > 0) out.coefficient_residual = std::max(out.coefficient_residual, static_cast<double>(lhs.cwiseAbs().maxCoeff()));
  }
  return out;
}

struct ResidualOrderReport {
  std::vector<double> scales;
  std::vector<double> slopes;      // one per direction
  double min_slope = 0.0;
  double dispersion = 0.0;         // max - min slope
  double max_residual = 0.0;
  int order = 0;
  bool polynomial_case = false;    // f has degree <= order
  bool pass = false;
};

nlohmann::json to_json(const ResidualOrderReport& r);

/// Evaluates |g(Ax) - g(x) - f(x)| at x = s v, s in {1e-1 .. 1e-4}, for
/// `directions` random unit v and fits log-log slopes. When f_degree <= m
/// the residual must be at machine zero (1e-12); otherwise every slope must
/// be >= m + 0.5.
template <class Scalar>
ResidualOrderReport residual_order_check(const JetSequence<Scalar>& g, const LinearAuto& a,
                                         const std::function<Scalar(const Vector&)>& f, int m,
                                         std::optional<int> f_degree, int directions, std::uint64_t seed);

}  // namespace blidkit
