#pragma once

#include <functional>

namespace blidkit {

/// Smooth transition g on the unit interval: 0 for u <= 0, 1 for u >= 1,
/// g(u) = psi(u) / (psi(u) + psi(1-u)) with psi(u) = exp(-1/u).
double smooth_step(double u);
double smooth_step_derivative(double u);

/// C-infinity bump on the real line: exactly 1 on |s| <= r_inner, exactly 0
/// on |s| >= r_outer, monotone in |s| in between.
class BumpFunction {
 public:
  BumpFunction() : BumpFunction(1.0 / 3.0, 0.5) {}
  BumpFunction(double r_inner, double r_outer);

  double r_inner() const { return r_inner_; }
  double r_outer() const { return r_outer_; }

  /// a = sup_u h(u) u.
  double sup_hu() const { return sup_hu_; }

  double operator()(double s) const;
  double derivative(double s) const;

  /// The scalar blid u -> h(u) u and its derivative.
  double damp(double u) const { return (*this)(u) * u; }
  double damp_derivative(double u) const { return derivative(u) * u + (*this)(u); }

  /// sup_u |d/du (h(u) u)|.
  double sup_damp_derivative() const { return sup_damp_derivative_; }

 private:
  double r_inner_;
  double r_outer_;
  double sup_hu_ = 0.0;
  double sup_damp_derivative_ = 0.0;
};

/// Maximizes fn over [lo, hi] on a uniform grid of `points` samples, then
/// polishes the best sample with a bracketed local search.
double grid_maximize(const std::function<double(double)>& fn, double lo, double hi, int points);

/// Smooth function of the plane that is 1 on the band
/// A = {(t, x) : lower(t) <= x <= upper(t)} and 0 at vertical distance
/// >= margin from it.
class PlaneBump {
 public:
  PlaneBump(std::function<double(double)> lower, std::function<double(double)> upper, double margin);

  double operator()(double t, double x) const;
  /// Vertical distance from (t, x) to the band.
  double distance(double t, double x) const;

  double margin() const { return margin_; }
  double lower(double t) const { return lower_(t); }
  double upper(double t) const { return upper_(t); }

 private:
  std::function<double(double)> lower_;
  std::function<double(double)> upper_;
  double margin_;
};

}  // namespace blidkit
