#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace blidkit {

using Vector = Eigen::VectorXd;

/// Error raised when two elements are not defined on the same representation.
struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Requested derivative order exceeds what an element or space provides.
struct OrderOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// A seminorm window that is not covered by the element's domain.
struct DomainCoverage : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Uniform grid on a closed interval.
class GridInterval {
 public:
  GridInterval(double left, double right, std::size_t n_points);

  double left() const { return left_; }
  double right() const { return right_; }
  std::size_t size() const { return n_; }
  double spacing() const { return spacing_; }
  double point(std::size_t i) const { return left_ + spacing_ * static_cast<double>(i); }
  Vector points() const;

  /// Index of the grid point nearest to t (clamped to the grid).
  std::size_t nearest_index(double t) const;

  bool operator==(const GridInterval& other) const {
    return left_ == other.left_ && right_ == other.right_ && n_ == other.n_;
  }

 private:
  double left_;
  double right_;
  std::size_t n_;
  double spacing_;
};

/// Element of C^q on a grid, stored as the jet (x, x', ..., x^(q-1)) at an
/// anchor grid point together with samples of the top derivative x^(q).
/// Lower derivatives are recovered by cumulative quadrature from the anchor.
class CqElement {
 public:
  CqElement(int q, GridInterval grid, Vector jet, Vector top, std::size_t anchor = 0);

  /// q = 0 element from sampled values.
  static CqElement from_values(const GridInterval& grid, Vector values);
  static CqElement from_function(const GridInterval& grid, const std::function<double(double)>& fn);
  static CqElement zero(int q, const GridInterval& grid, std::size_t anchor = 0);

  int q() const { return q_; }
  const GridInterval& grid() const { return grid_; }
  const Vector& jet() const { return jet_; }
  const Vector& top() const { return top_; }
  std::size_t anchor() const { return anchor_; }
  double anchor_point() const { return grid_.point(anchor_); }

  /// True when jet and top samples vanish, i.e. every derivative is zero.
  bool is_zero() const;

  /// Same representation (grid, q, anchor).
  bool compatible(const CqElement& other) const;

  /// Flattened coordinates (jet followed by top samples).
  Vector coordinates() const;
  CqElement with_coordinates(const Vector& coords) const;

  CqElement& operator+=(const CqElement& other);
  CqElement& operator-=(const CqElement& other);
  CqElement& operator*=(double s);

 private:
  int q_;
  GridInterval grid_;
  Vector jet_;
  Vector top_;
  std::size_t anchor_;
};

CqElement operator+(CqElement a, const CqElement& b);
CqElement operator-(CqElement a, const CqElement& b);
CqElement operator*(double s, CqElement a);

/// Per-interval quadrature weights. The scheme integrates the local cubic
/// interpolant, so it is exact for cubic polynomials. Every interval's
/// absolute weight sum is at most kQuadratureGain times the spacing.
inline constexpr double kQuadratureGain = 17.0 / 12.0;

/// Integral of the sampled function over each grid interval (size n-1).
Vector interval_integrals(const Vector& samples, double spacing);

/// F(t_i) = integral from t_anchor to t_i of the sampled function.
Vector cumulative_integral(const Vector& samples, double spacing, std::size_t anchor);

/// Composite Simpson rule over the whole grid (3/8 rule closes even counts).
double simpson(const Vector& samples, double spacing);

/// Samples of x^(j), 0 <= j <= q.
Vector reconstruct_derivative(const CqElement& x, int j);

/// All derivatives x^(0..q); row j holds x^(j).
Eigen::MatrixXd derivative_table(const CqElement& x);

/// max over j <= q and the whole domain of |x^(j)|.
double sup_norm(const CqElement& x);

enum class SpaceKind { CqInterval, CqLine, CinfInterval, CinfLine };

/// The countable family of seminorms ||x||_k that topologizes one of the
/// function spaces. Interval spaces use the fixed window [0,1]; line spaces
/// use [-k, k]. Cq spaces use the fixed order q; C-infinity spaces use k.
class SeminormFamily {
 public:
  SeminormFamily(SpaceKind kind, int q = 0, double left = 0.0, double right = 1.0);

  static SeminormFamily cq_interval(int q) { return {SpaceKind::CqInterval, q}; }
  static SeminormFamily cinf_interval() { return {SpaceKind::CinfInterval}; }
  static SeminormFamily cq_line(int q) { return {SpaceKind::CqLine, q}; }
  static SeminormFamily cinf_line() { return {SpaceKind::CinfLine}; }

  SpaceKind kind() const { return kind_; }
  int q() const { return q_; }
  bool is_line() const { return kind_ == SpaceKind::CqLine || kind_ == SpaceKind::CinfLine; }

  std::pair<double, double> window(int k) const;
  int order(int k) const;

 private:
  SpaceKind kind_;
  int q_;
  double left_;
  double right_;
};

std::string to_string(SpaceKind kind);

double seminorm(const CqElement& x, int k, const SeminormFamily& family);

/// Truncated Frechet metric sum_{k<=k_max} 2^-k ||x-y||_k / (1 + ||x-y||_k).
struct FrechetMetric {
  SeminormFamily seminorms;
  int k_max = 40;

  /// Bound on the discarded series tail, 2^-k_max.
  double tail_bound() const;
};

/// Levels whose order exceeds the stored smoothness of x - y are not
/// represented; they contribute their supremum 2^-k unless x - y vanishes
/// identically, so the returned value bounds the true distance from above.
double metric(const CqElement& x, const CqElement& y, const FrechetMetric& m);

nlohmann::json to_json(const CqElement& x);
CqElement element_from_json(const nlohmann::json& j);

/// Two-column CSV "t,value" of the j-th derivative.
std::string to_csv(const CqElement& x, int j = 0);

}  // namespace blidkit
