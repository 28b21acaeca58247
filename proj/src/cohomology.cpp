#include "blidkit/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "blidkit/sampling.hpp"

namespace blidkit {

LinearAuto::LinearAuto(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    throw ShapeMismatch("LinearAuto: matrix must be square and nonempty");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_);
  const auto& sv = svd.singularValues();
  if (!(sv.minCoeff() > 1e-12 * std::max(1.0, sv.maxCoeff())))
    throw std::invalid_argument("LinearAuto: matrix is not invertible");
  const Eigen::MatrixXd off = matrix_ - Eigen::MatrixXd(matrix_.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() == 0.0) {
    eigenvalues_ = matrix_.diagonal().cast<std::complex<double>>();
  } else {
    eigenvalues_ = Eigen::EigenSolver<Eigen::MatrixXd>(matrix_, false).eigenvalues();
  }
  hyperbolic_ = std::none_of(eigenvalues_.data(), eigenvalues_.data() + eigenvalues_.size(),
                             [](const std::complex<double>& l) { return std::abs(std::abs(l) - 1.0) <= 1e-9; });
}

LinearAuto linear_auto_from_json(const nlohmann::json& j) {
  const auto& rows = j.is_object() ? j.at("matrix") : j;
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != n) throw ShapeMismatch("matrix JSON: rows must have equal length");
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return LinearAuto(std::move(m));
}

CompositionOperator build_Ln(const LinearAuto& a, int n) {
  if (n < 1) throw std::invalid_argument("build_Ln: degree must be >= 1");
  const int d = static_cast<int>(a.dimension());
  std::vector<HomPoly<double>> forms;
  for (int i = 0; i < d; ++i) forms.emplace_back(d, 1, a.matrix().row(i).transpose());
  HomPoly<double> one(d, 0);
  one.coeffs()[0] = 1.0;

  const std::vector<MultiIndex> basis = multi_indices(d, n);
  CompositionOperator op{n, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.size()),
                                                  static_cast<Eigen::Index>(basis.size()))};
  for (std::size_t col = 0; col < basis.size(); ++col) {
    HomPoly<double> image = one;
    for (int i = 0; i < d; ++i)
      for (int p = 0; p < basis[col][static_cast<std::size_t>(i)]; ++p) image = image * forms[static_cast<std::size_t>(i)];
    op.matrix.col(static_cast<Eigen::Index>(col)) = image.coeffs();
  }
  return op;
}

Eigen::VectorXcd eigenvalue_products(const LinearAuto& a, int n) {
  const std::vector<MultiIndex> basis = multi_indices(static_cast<int>(a.dimension()), n);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::complex<double> prod{1.0, 0.0};
    for (std::size_t k = 0; k < basis[i].size(); ++k)
      for (int p = 0; p < basis[i][k]; ++p) prod *= a.eigenvalues()[static_cast<Eigen::Index>(k)];
    out[static_cast<Eigen::Index>(i)] = prod;
  }
  return out;
}

std::vector<MultiIndex> resonances(const LinearAuto& a, int n) {
  const std::vector<MultiIndex> basis = multi_indices(static_cast<int>(a.dimension()), n);
  const Eigen::VectorXcd products = eigenvalue_products(a, n);
  std::vector<MultiIndex> out;
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (std::abs(products[static_cast<Eigen::Index>(i)] - 1.0) < 1e-7) out.push_back(basis[i]);
  return out;
}

double eigenvalue_law_error(const LinearAuto& a, int n) {
  const Eigen::VectorXcd predicted = eigenvalue_products(a, n);
  const Eigen::VectorXcd computed = Eigen::EigenSolver<Eigen::MatrixXd>(build_Ln(a, n).matrix, false).eigenvalues();
  std::vector<bool> used(static_cast<std::size_t>(computed.size()), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < predicted.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index best_j = -1;
    for (Eigen::Index j = 0; j < computed.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double dist = std::abs(computed[j] - predicted[i]);
      if (dist < best) {
        best = dist;
        best_j = j;
      }
    }
    used[static_cast<std::size_t>(best_j)] = true;
    worst = std::max(worst, best / std::max(1.0, std::abs(predicted[i])));
  }
  return worst;
}

namespace {

std::string unsolvable_message(int degree, const std::vector<MultiIndex>& resonant) {
  std::string msg = "equation of degree " + std::to_string(degree) + " is not solvable; resonant multi-indices:";
  for (const auto& alpha : resonant) msg += " " + to_string(alpha);
  return msg;
}

}  // namespace

Unsolvable::Unsolvable(int degree, std::vector<MultiIndex> resonant, double residual)
    : std::runtime_error(unsolvable_message(degree, resonant)),
      degree_(degree),
      resonant_(std::move(resonant)),
      residual_(residual) {}

nlohmann::json to_json(const ResidualOrderReport& r) {
  return {{"scales", r.scales},         {"slopes", r.slopes},           {"min_slope", r.min_slope},
          {"dispersion", r.dispersion}, {"max_residual", r.max_residual}, {"order", r.order},
          {"polynomial_case", r.polynomial_case}, {"pass", r.pass}};
}

template <class Scalar>
ResidualOrderReport residual_order_check(const JetSequence<Scalar>& g, const LinearAuto& a,
                                         const std::function<Scalar(const Vector&)>& f, int m,
                                         std::optional<int> f_degree, int directions, std::uint64_t seed) {
  ResidualOrderReport r;
  r.scales = {1e-1, 1e-2, 1e-3, 1e-4};
  r.order = m;
  r.polynomial_case = f_degree.has_value() && *f_degree <= m;
  Rng rng = make_stream(seed, "residual-order");
  r.min_slope = std::numeric_limits<double>::infinity();
  double max_slope = -std::numeric_limits<double>::infinity();
  for (int di = 0; di < directions; ++di) {
    const Vector v = random_unit_vector(rng, a.dimension());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double s : r.scales) {
      const Vector x = s * v;
      const double res = std::abs(g.taylor(Vector(a(x))) - g.taylor(x) - f(x));
      r.max_residual = std::max(r.max_residual, res);
      const double lx = std::log10(s);
      const double ly = std::log10(std::max(res, 1e-300));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const auto n = static_cast<double>(r.scales.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.slopes.push_back(slope);
    r.min_slope = std::min(r.min_slope, slope);
    max_slope = std::max(max_slope, slope);
  }
  r.dispersion = directions > 0 ? max_slope - r.min_slope : 0.0;
  r.pass = r.polynomial_case ? r.max_residual <= 1e-12 : r.min_slope >= m + 0.5;
  return r;
}

template ResidualOrderReport residual_order_check<double>(const JetSequence<double>&, const LinearAuto&,
                                                          const std::function<double(const Vector&)>&, int,
                                                          std::optional<int>, int, std::uint64_t);
template ResidualOrderReport residual_order_check<std::complex<double>>(
    const JetSequence<std::complex<double>>&, const LinearAuto&,
    const std::function<std::complex<double>(const Vector&)>&, int, std::optional<int>, int, std::uint64_t);

}  // namespace blidkit
