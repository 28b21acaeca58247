#include "blidkit/function_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blidkit {

GridInterval::GridInterval(double left, double right, std::size_t n_points)
    : left_(left), right_(right), n_(n_points), spacing_(0.0) {
  if (!(left < right)) throw std::invalid_argument("GridInterval: left must be < right");
  if (n_points < 2) throw std::invalid_argument("GridInterval: need at least 2 points");
  spacing_ = (right - left) / static_cast<double>(n_points - 1);
}

Vector GridInterval::points() const {
  Vector t(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) t[static_cast<Eigen::Index>(i)] = point(i);
  return t;
}

std::size_t GridInterval::nearest_index(double t) const {
  const double r = std::round((t - left_) / spacing_);
  if (r <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(r), n_ - 1);
}

CqElement::CqElement(int q, GridInterval grid, Vector jet, Vector top, std::size_t anchor)
    : q_(q), grid_(grid), jet_(std::move(jet)), top_(std::move(top)), anchor_(anchor) {
  if (q < 0) throw std::invalid_argument("CqElement: q must be nonnegative");
  if (jet_.size() != q) throw ShapeMismatch("CqElement: jet length must equal q");
  if (static_cast<std::size_t>(top_.size()) != grid_.size())
    throw ShapeMismatch("CqElement: top samples must match grid size");
  if (anchor >= grid_.size()) throw std::out_of_range("CqElement: anchor outside grid");
}

CqElement CqElement::from_values(const GridInterval& grid, Vector values) {
  return CqElement(0, grid, Vector(0), std::move(values));
}

CqElement CqElement::from_function(const GridInterval& grid, const std::function<double(double)>& fn) {
  Vector v(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) v[static_cast<Eigen::Index>(i)] = fn(grid.point(i));
  return from_values(grid, std::move(v));
}

CqElement CqElement::zero(int q, const GridInterval& grid, std::size_t anchor) {
  return CqElement(q, grid, Vector::Zero(q), Vector::Zero(static_cast<Eigen::Index>(grid.size())), anchor);
}

bool CqElement::is_zero() const {
  return (jet_.size() == 0 || jet_.cwiseAbs().maxCoeff() == 0.0) && top_.cwiseAbs().maxCoeff() == 0.0;
}

bool CqElement::compatible(const CqElement& other) const {
  return q_ == other.q_ && grid_ == other.grid_ && anchor_ == other.anchor_;
}

Vector CqElement::coordinates() const {
  Vector c(jet_.size() + top_.size());
  c << jet_, top_;
  return c;
}

CqElement CqElement::with_coordinates(const Vector& coords) const {
  if (coords.size() != jet_.size() + top_.size()) throw ShapeMismatch("with_coordinates: size mismatch");
  return CqElement(q_, grid_, coords.head(q_), coords.tail(top_.size()), anchor_);
}

CqElement& CqElement::operator+=(const CqElement& other) {
  if (!compatible(other)) throw ShapeMismatch("CqElement: incompatible representations");
  jet_ += other.jet_;
  top_ += other.top_;
  return *this;
}

CqElement& CqElement::operator-=(const CqElement& other) {
  if (!compatible(other)) throw ShapeMismatch("CqElement: incompatible representations");
  jet_ -= other.jet_;
  top_ -= other.top_;
  return *this;
}

CqElement& CqElement::operator*=(double s) {
  jet_ *= s;
  top_ *= s;
  return *this;
}

CqElement operator+(CqElement a, const CqElement& b) { return a += b; }
CqElement operator-(CqElement a, const CqElement& b) { return a -= b; }
CqElement operator*(double s, CqElement a) { return a *= s; }

Vector interval_integrals(const Vector& f, double h) {
  const Eigen::Index n = f.size();
  if (n < 2) throw std::invalid_argument("interval_integrals: need at least 2 samples");
  Vector out(n - 1);
  if (n == 2) {
    out[0] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  if (n == 3) {
    out[0] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    out[1] = h / 12.0 * (-f[0] + 8.0 * f[1] + 5.0 * f[2]);
    return out;
  }
  const double w = h / 24.0;
  out[0] = w * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
  for (Eigen::Index i = 1; i + 2 < n; ++i)
    out[i] = w * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]);
  out[n - 2] = w * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]);
  return out;
}

Vector cumulative_integral(const Vector& f, double h, std::size_t anchor) {
  const Vector pieces = interval_integrals(f, h);
  const auto a = static_cast<Eigen::Index>(anchor);
  Vector out(f.size());
  out[a] = 0.0;
  for (Eigen::Index i = a; i + 1 < f.size(); ++i) out[i + 1] = out[i] + pieces[i];
  for (Eigen::Index i = a; i > 0; --i) out[i - 1] = out[i] - pieces[i - 1];
  return out;
}

double simpson(const Vector& f, double h) {
  const Eigen::Index n = f.size();
  if (n < 2) throw std::invalid_argument("simpson: need at least 2 samples");
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  Eigen::Index simpson_end = n - 1;  // last index covered by Simpson panels
  double tail = 0.0;
  if ((n - 1) % 2 == 1) {
    simpson_end = n - 4;
    tail = 3.0 * h / 8.0 * (f[n - 4] + 3.0 * f[n - 3] + 3.0 * f[n - 2] + f[n - 1]);
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i + 2 <= simpson_end; i += 2) s += f[i] + 4.0 * f[i + 1] + f[i + 2];
  return h / 3.0 * s + tail;
}

Vector reconstruct_derivative(const CqElement& x, int j) {
  if (j < 0 || j > x.q())
    throw OrderOutOfRange("reconstruct_derivative: order " + std::to_string(j) + " exceeds q = " +
                          std::to_string(x.q()));
  Vector current = x.top();
  for (int level = x.q() - 1; level >= j; --level)
    current = (x.jet()[level] + cumulative_integral(current, x.grid().spacing(), x.anchor()).array()).matrix();
  return current;
}

Eigen::MatrixXd derivative_table(const CqElement& x) {
  Eigen::MatrixXd table(x.q() + 1, x.top().size());
  Vector current = x.top();
  table.row(x.q()) = current.transpose();
  for (int level = x.q() - 1; level >= 0; --level) {
    current = (x.jet()[level] + cumulative_integral(current, x.grid().spacing(), x.anchor()).array()).matrix();
    table.row(level) = current.transpose();
  }
  return table;
}

double sup_norm(const CqElement& x) { return derivative_table(x).cwiseAbs().maxCoeff(); }

SeminormFamily::SeminormFamily(SpaceKind kind, int q, double left, double right)
    : kind_(kind), q_(q), left_(left), right_(right) {
  if (q < 0) throw std::invalid_argument("SeminormFamily: q must be nonnegative");
}

std::pair<double, double> SeminormFamily::window(int k) const {
  if (is_line()) return {-static_cast<double>(k), static_cast<double>(k)};
  return {left_, right_};
}

int SeminormFamily::order(int k) const {
  if (kind_ == SpaceKind::CqInterval || kind_ == SpaceKind::CqLine) return q_;
  return k;
}

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::CqInterval: return "Cq_interval";
    case SpaceKind::CqLine: return "Cq_line";
    case SpaceKind::CinfInterval: return "Cinf_interval";
    case SpaceKind::CinfLine: return "Cinf_line";
  }
  return "unknown";
}

namespace {

// Grid index range [lo, hi] covered by the window at level k.
std::pair<std::size_t, std::size_t> window_indices(const GridInterval& grid, const SeminormFamily& family, int k) {
  const auto [a, b] = family.window(k);
  const double tol = 1e-9 * grid.spacing();
  if (a < grid.left() - tol || b > grid.right() + tol)
    throw DomainCoverage("seminorm: window [" + std::to_string(a) + ", " + std::to_string(b) +
                         "] exceeds the element domain");
  const double lo_r = std::ceil((a - grid.left()) / grid.spacing() - 1e-9);
  const double hi_r = std::floor((b - grid.left()) / grid.spacing() + 1e-9);
  if (hi_r < lo_r) {
    const std::size_t i = grid.nearest_index(0.5 * (a + b));
    return {i, i};
  }
  return {static_cast<std::size_t>(std::max(0.0, lo_r)),
          std::min(static_cast<std::size_t>(hi_r), grid.size() - 1)};
}

double seminorm_from_table(const Eigen::MatrixXd& table, const GridInterval& grid, int k,
                           const SeminormFamily& family) {
  const auto [lo, hi] = window_indices(grid, family, k);
  const int order = family.order(k);
  return table.topRows(order + 1)
      .middleCols(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(hi - lo + 1))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

double seminorm(const CqElement& x, int k, const SeminormFamily& family) {
  if (k < 0) throw std::invalid_argument("seminorm: k must be nonnegative");
  if (family.order(k) > x.q())
    throw OrderOutOfRange("seminorm: level " + std::to_string(k) + " needs order " +
                          std::to_string(family.order(k)) + " but element has q = " + std::to_string(x.q()));
  return seminorm_from_table(derivative_table(x), x.grid(), k, family);
}

double FrechetMetric::tail_bound() const { return std::ldexp(1.0, -k_max); }

double metric(const CqElement& x, const CqElement& y, const FrechetMetric& m) {
  if (!x.compatible(y)) throw ShapeMismatch("metric: elements have incompatible representations");
  const CqElement diff = x - y;
  if (diff.is_zero()) return 0.0;
  const Eigen::MatrixXd table = derivative_table(diff);
  double total = 0.0;
  for (int k = 0; k <= m.k_max; ++k) {
    const double weight = std::ldexp(1.0, -k);
    if (m.seminorms.order(k) > diff.q()) {
      total += weight;
      continue;
    }
    const double s = seminorm_from_table(table, diff.grid(), k, m.seminorms);
    total += weight * s / (s + 1.0);
  }
  return total;
}

nlohmann::json to_json(const CqElement& x) {
  nlohmann::json j;
  j["q"] = x.q();
  j["domain"] = {{"left", x.grid().left()}, {"right", x.grid().right()}, {"n", x.grid().size()}};
  j["jet"] = std::vector<double>(x.jet().data(), x.jet().data() + x.jet().size());
  j["top"] = std::vector<double>(x.top().data(), x.top().data() + x.top().size());
  if (x.anchor() != 0) j["anchor"] = x.anchor();
  return j;
}

CqElement element_from_json(const nlohmann::json& j) {
  const auto& d = j.at("domain");
  GridInterval grid(d.at("left").get<double>(), d.at("right").get<double>(), d.at("n").get<std::size_t>());
  const auto jet = j.value("jet", std::vector<double>{});
  const auto top = j.at("top").get<std::vector<double>>();
  return CqElement(j.at("q").get<int>(), grid, Eigen::Map<const Vector>(jet.data(), static_cast<Eigen::Index>(jet.size())),
                   Eigen::Map<const Vector>(top.data(), static_cast<Eigen::Index>(top.size())),
                   j.value("anchor", std::size_t{0}));
}

std::string to_csv(const CqElement& x, int j) {
  const Vector v = reconstruct_derivative(x, j);
  std::ostringstream os;
  os.precision(17);
  os << "t,value\n";
  for (std::size_t i = 0; i < x.grid().size(); ++i) os << x.grid().point(i) << ',' << v[static_cast<Eigen::Index>(i)] << '\n';
  return os.str();
}

}  // namespace blidkit
