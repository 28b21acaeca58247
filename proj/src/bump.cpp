#include "blidkit/bump.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

namespace blidkit {

namespace {

// phi(u) = 1/u - 1/(1-u); g(u) = 1 / (1 + exp(phi(u))).
double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return logistic(1.0 / (1.0 - u) - 1.0 / u);
}

double smooth_step_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double g = logistic(1.0 / (1.0 - u) - 1.0 / u);
  const double dz = 1.0 / ((1.0 - u) * (1.0 - u)) + 1.0 / (u * u);
  return g * (1.0 - g) * dz;
}

double grid_maximize(const std::function<double(double)>& fn, double lo, double hi, int points) {
  const double step = (hi - lo) / static_cast<double>(points - 1);
  int best = 0;
  double best_value = fn(lo);
  for (int i = 1; i < points; ++i) {
    const double v = fn(lo + step * i);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = std::max(lo, lo + step * (best - 1));
  const double b = std::min(hi, lo + step * (best + 1));
  const auto [arg, neg] = boost::math::tools::brent_find_minima([&](double u) { return -fn(u); }, a, b,
                                                                std::numeric_limits<double>::digits / 2);
  (void)arg;
  return std::max(best_value, -neg);
}

BumpFunction::BumpFunction(double r_inner, double r_outer) : r_inner_(r_inner), r_outer_(r_outer) {
  if (!(r_inner > 0.0)) throw std::invalid_argument("BumpFunction: r_inner must be positive");
  if (!(r_inner < r_outer)) throw std::invalid_argument("BumpFunction: r_inner must be < r_outer");
  constexpr int kGrid = 100000;
  sup_hu_ = grid_maximize([this](double u) { return damp(u); }, 0.0, r_outer_, kGrid);
  sup_damp_derivative_ = std::max(
      1.0, grid_maximize([this](double u) { return std::abs(damp_derivative(u)); }, r_inner_, r_outer_, kGrid));
}

double BumpFunction::operator()(double s) const {
  const double m = std::abs(s);
  if (m <= r_inner_) return 1.0;
  if (m >= r_outer_) return 0.0;
  return smooth_step((r_outer_ - m) / (r_outer_ - r_inner_));
}

double BumpFunction::derivative(double s) const {
  const double m = std::abs(s);
  if (m <= r_inner_ || m >= r_outer_) return 0.0;
  const double width = r_outer_ - r_inner_;
  const double sign = s > 0.0 ? 1.0 : -1.0;
  return -sign / width * smooth_step_derivative((r_outer_ - m) / width);
}

PlaneBump::PlaneBump(std::function<double(double)> lower, std::function<double(double)> upper, double margin)
    : lower_(std::move(lower)), upper_(std::move(upper)), margin_(margin) {
  if (!(margin > 0.0)) throw std::invalid_argument("PlaneBump: margin must be positive");
}

double PlaneBump::distance(double t, double x) const {
  const double lo = std::min(lower_(t), upper_(t));
  const double hi = std::max(lower_(t), upper_(t));
  return std::max(0.0, std::max(lo - x, x - hi));
}

double PlaneBump::operator()(double t, double x) const {
  return smooth_step((margin_ - distance(t, x)) / margin_);
}

}  // namespace blidkit
