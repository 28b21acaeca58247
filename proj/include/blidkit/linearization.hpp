#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blidkit/bump.hpp"
#include "blidkit/cohomology.hpp"
#include "blidkit/differentiability.hpp"

namespace blidkit {

/// Coordinate blid on R^d with certified bounds ||H|| <= c0 and
/// ||DH|| <= c1 in the sup norm.
struct FirstOrderBlid {
  BumpFunction bump;
  double c0 = 0.0;
  double c1 = 0.0;

  /// H(x) = x on ||x||_inf <= identity_radius().
  double identity_radius() const { return bump.r_inner(); }
  double outer_radius() const { return bump.r_outer(); }
  Vector operator()(const Vector& x) const;
};

/// c0 = sup |h(u) u|, c1 = sup |(h(u) u)'|.
FirstOrderBlid certify_first_order(const BumpFunction& bump);

/// F = Lambda + f near a fixed point at 0.
class NonlinearPart {
 public:
  NonlinearPart(std::string name, VectorMap map, LinearAuto lambda);

  const std::string& name() const { return name_; }
  const LinearAuto& lambda() const { return lambda_; }
  Vector full(const Vector& x) const { return map_(x); }
  /// f(x) = F(x) - Lambda x.
  Vector operator()(const Vector& x) const { return map_(x) - lambda_(x); }
  Eigen::Index dimension() const { return lambda_.dimension(); }

  /// ||f(0)||_inf and ||Df(0)|| (finite differences).
  std::pair<double, double> fixed_point_defects() const;

 private:
  std::string name_;
  VectorMap map_;
  LinearAuto lambda_;
};

struct CutoffParams {
  double delta = 0.1;
  double delta_eta = 0.1;
  double alpha = 1.0;
  double M = 2.0;
  double c0 = 0.0;
  double c1 = 0.0;
  double epsilon = 0.5;
  double m = 0.0;
};

/// "quadratic-1d": F(x) = 2x + x^2; "quadratic-2d": F(x, y) = (2x + y^2, y/2 + x^2).
NonlinearPart nonlinear_catalog(const std::string& name);
/// Hoelder constant of Df for the catalog maps (alpha = 1).
double catalog_holder_constant(const std::string& name);

/// f~(x) = f(delta H(x / delta)).
VectorMap cutoff(const NonlinearPart& f, const FirstOrderBlid& h, double delta);

struct SplitReport {
  double delta = 0.0;
  double epsilon = 0.0;
  double small_max = 0.0;   // sup of ||delta H(x/delta)|| / ||x|| with ||x/delta|| < epsilon
  double large_max = 0.0;   // same for ||x/delta|| >= epsilon
  double identity_max_error = 0.0;  // |ratio - 1| inside the identity ball
  double m = 0.0;           // max(c1, c0 / epsilon)
  double m_empirical = 0.0;
  bool pass = false;
};

nlohmann::json to_json(const SplitReport& r);

SplitReport split_bound_check(const FirstOrderBlid& h, double delta, double epsilon, int samples, std::uint64_t seed,
                              Eigen::Index dimension = 1);

struct CutoffReport {
  double S1 = 0.0;
  double bound1 = 0.0;
  double hypothesis1 = 0.0;  // sampled sup of ||Df|| on ||y|| <= delta c0
  bool hypothesis1_holds = false;
  double S2 = 0.0;
  double bound2 = 0.0;
  double holder_observed = 0.0;  // sampled sup ||Df(y)|| / ||y||^alpha on ||y|| <= delta c0
  double m = 0.0;
  double exterior_max_derivative = 0.0;
  int exterior_samples = 0;
  double sup_cutoff = 0.0;   // sampled sup ||f~|| on ||x|| <= 1e3 delta
  double sup_local = 0.0;    // sampled sup ||f|| on ||y|| <= delta c0
  double agreement_max_error = 0.0;
  std::vector<Vector> witnesses;
  bool pass1 = false;
  bool pass2 = false;
  bool pass = false;
  std::string caveat;
};

nlohmann::json to_json(const CutoffReport& r);

/// Log-spaced shell magnitudes 0.01 delta .. 100 delta.
std::vector<double> default_shells(double delta, int count = 7);

/// Samples ||Df~|| over the shells and checks
///   (i)  sup ||Df~|| <= delta_eta c1 when sup_{||y|| <= delta c0} ||Df|| <= delta_eta,
///   (ii) sup ||Df~(x)|| / ||x||^alpha <= M c1 m^alpha,
/// together with exterior flatness, agreement near 0 and global boundedness.
CutoffReport verify_76(const NonlinearPart& f, const FirstOrderBlid& h, const CutoffParams& params,
                       int directions_per_shell, std::uint64_t seed);

}  // namespace blidkit
