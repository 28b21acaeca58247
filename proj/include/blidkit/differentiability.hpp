#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blidkit/function_space.hpp"

namespace blidkit {

using VectorMap = std::function<Vector(const Vector&)>;

/// Finite-difference weights for the `order`-th derivative at 0 on the given
/// nodes (Fornberg's recursion).
std::vector<double> fd_weights(int order, const std::vector<double>& nodes);

/// Symmetric nodes -p..p with p = floor((order + 1) / 2); second order accurate.
std::vector<double> central_stencil(int order);

/// Step balancing the fourth-order truncation error of the Richardson
/// estimate against rounding: scale * eps^(1 / (order + 4)).
double default_fd_step(int order, double scale = 1.0);

/// order-th derivative at 0 of g via the central stencil with step h,
/// followed by one Richardson extrapolation against step h / 2.
template <class G>
auto derivative_at_zero(const G& g, int order, double h) {
  const std::vector<double> nodes = central_stencil(order);
  const std::vector<double> w = fd_weights(order, nodes);
  auto estimate = [&](double step) {
    auto acc = g(0.0);
    acc *= 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (w[i] != 0.0) acc += w[i] * g(nodes[i] * step);
    acc *= 1.0 / std::pow(step, order);
    return acc;
  };
  auto coarse = estimate(h);
  auto fine = estimate(0.5 * h);
  fine *= 4.0 / 3.0;
  coarse *= 1.0 / 3.0;
  fine -= coarse;
  return fine;
}

/// Central-difference Jacobian.
Eigen::MatrixXd jacobian(const VectorMap& f, const Vector& x, double step = 1e-6);

/// Operator norm induced by the sup norm (max absolute row sum).
double sup_operator_norm(const Eigen::MatrixXd& m);

/// Inputs for the bounded-differentiability check: remainder
/// r(t, h) = F(x + t h) - F(x) - t A h over a bounded direction set.
struct DirectionalProbe {
  Vector base;
  std::vector<Vector> directions;
  std::vector<double> steps;
  VectorMap derivative;
  double tolerance = 1e-3;

  /// Steps 1e-1 .. 1e-5.
  static std::vector<double> default_steps();
};

struct DiffReport {
  std::string notion;
  Vector base;
  int n_directions = 0;
  std::vector<double> steps;
  std::vector<double> ratios;
  std::optional<double> slope;
  bool converged_at_floor = false;
  bool monotone = false;
  bool pass = false;
  std::string error;
};

nlohmann::json to_json(const DiffReport& r);

/// Ratios below this are treated as converged (quadrature/rounding floor).
inline constexpr double kRemainderFloor = 1e-9;

/// Uniform over the direction set: ratio(t) = max_h ||r(t,h)||_inf / t.
DiffReport bounded_diff_test(const VectorMap& f, const DirectionalProbe& probe);

/// Single-direction variant of the bounded test.
DiffReport gateaux_diff_test(const VectorMap& f, const Vector& base, const Vector& direction,
                             const std::vector<double>& steps, const VectorMap& derivative, double tolerance = 1e-3);

/// ||F(x + t_n h_n) - F(x) - t_n A h||_inf / t_n along a convergent sequence h_n -> h.
DiffReport compact_diff_test(const VectorMap& f, const Vector& base, const std::vector<Vector>& h_sequence,
                             const Vector& h_limit, const std::vector<double>& t_sequence,
                             const VectorMap& derivative, double tolerance = 1e-3);

/// 20 smooth directions (monomials, sinusoids) and 5 high-frequency ones, as
/// element coordinates with sup_norm equal to 1.
std::vector<Vector> standard_directions(const GridInterval& grid, int q, int smooth = 20, int rough = 5);

/// Adapts an element map to coordinates of elements shaped like `prototype`.
VectorMap coordinate_map(std::function<CqElement(const CqElement&)> f, const CqElement& prototype);

}  // namespace blidkit
