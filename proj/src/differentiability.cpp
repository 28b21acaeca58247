#include "blidkit/differentiability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace blidkit {

std::vector<double> fd_weights(int order, const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size()) - 1;
  if (order < 0 || n < order) throw std::invalid_argument("fd_weights: not enough nodes for the requested order");
  std::vector<std::vector<double>> c(nodes.size(), std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0];
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i];
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = c[i][order];
  return w;
}

std::vector<double> central_stencil(int order) {
  const int p = std::max(1, (order + 1) / 2);
  std::vector<double> nodes;
  for (int i = -p; i <= p; ++i) nodes.push_back(static_cast<double>(i));
  return nodes;
}

double default_fd_step(int order, double scale) {
  return scale * std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (order + 4));
}

Eigen::MatrixXd jacobian(const VectorMap& f, const Vector& x, double step) {
  const Vector f0 = f(x);
  Eigen::MatrixXd jac(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vector xp = x, xm = x;
    xp[j] += step;
    xm[j] -= step;
    jac.col(j) = (f(xp) - f(xm)) / (2.0 * step);
  }
  return jac;
}

double sup_operator_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

std::vector<double> DirectionalProbe::default_steps() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}; }

namespace {

double sup(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

void validate_steps(const std::vector<double>& steps) {
  if (steps.size() < 2) throw std::invalid_argument("differentiability test: need at least two steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 0.0)) throw std::invalid_argument("differentiability test: steps must be positive");
    if (i > 0 && !(steps[i] < steps[i - 1]))
      throw std::invalid_argument("differentiability test: steps must be strictly decreasing");
  }
}

// Fills slope, monotonicity and the verdict from steps/ratios.
void finish(DiffReport& r, double tolerance) {
  std::vector<double> clamped(r.ratios.size());
  std::transform(r.ratios.begin(), r.ratios.end(), clamped.begin(),
                 [](double v) { return std::isfinite(v) ? std::max(v, kRemainderFloor) : v; });
  r.converged_at_floor = std::all_of(clamped.begin(), clamped.end(), [](double v) { return v <= kRemainderFloor; });
  r.monotone = true;
  for (std::size_t i = 1; i < clamped.size(); ++i)
    if (!(clamped[i] <= clamped[i - 1] * (1.0 + 1e-6))) r.monotone = false;
  if (!r.converged_at_floor && std::all_of(clamped.begin(), clamped.end(), [](double v) { return std::isfinite(v); })) {
    const auto n = static_cast<double>(clamped.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < clamped.size(); ++i) {
      const double lx = std::log10(r.steps[i]);
      const double ly = std::log10(clamped[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  r.pass = r.error.empty() && r.monotone && std::isfinite(clamped.back()) && clamped.back() <= tolerance;
}

}  // namespace

nlohmann::json to_json(const DiffReport& r) {
  nlohmann::json j;
  j["notion"] = r.notion;
  if (r.base.size() <= 16)
    j["base"] = std::vector<double>(r.base.data(), r.base.data() + r.base.size());
  else
    j["base_sup_norm"] = r.base.size() ? r.base.cwiseAbs().maxCoeff() : 0.0;
  j["n_directions"] = r.n_directions;
  j["steps"] = r.steps;
  j["ratios"] = r.ratios;
  j["slope"] = r.slope ? nlohmann::json(*r.slope) : nlohmann::json(nullptr);
  j["converged_at_floor"] = r.converged_at_floor;
  j["pass"] = r.pass;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

DiffReport bounded_diff_test(const VectorMap& f, const DirectionalProbe& probe) {
  validate_steps(probe.steps);
  if (probe.directions.empty()) throw std::invalid_argument("bounded_diff_test: empty direction set");
  DiffReport r;
  r.notion = "bounded";
  r.base = probe.base;
  r.n_directions = static_cast<int>(probe.directions.size());
  r.steps = probe.steps;
  try {
    const Vector f0 = f(probe.base);
    std::vector<Vector> ah;
    ah.reserve(probe.directions.size());
    for (const auto& h : probe.directions) ah.push_back(probe.derivative(h));
    for (double t : probe.steps) {
      double worst = 0.0;
      for (std::size_t i = 0; i < probe.directions.size(); ++i) {
        const Vector rem = f(probe.base + t * probe.directions[i]) - f0 - t * ah[i];
        worst = std::max(worst, sup(rem) / t);
      }
      r.ratios.push_back(worst);
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  finish(r, probe.tolerance);
  return r;
}

DiffReport gateaux_diff_test(const VectorMap& f, const Vector& base, const Vector& direction,
                             const std::vector<double>& steps, const VectorMap& derivative, double tolerance) {
  DirectionalProbe probe{base, {direction}, steps, derivative, tolerance};
  DiffReport r = bounded_diff_test(f, probe);
  r.notion = "gateaux";
  return r;
}

DiffReport compact_diff_test(const VectorMap& f, const Vector& base, const std::vector<Vector>& h_sequence,
                             const Vector& h_limit, const std::vector<double>& t_sequence,
                             const VectorMap& derivative, double tolerance) {
  validate_steps(t_sequence);
  if (h_sequence.size() != t_sequence.size())
    throw std::invalid_argument("compact_diff_test: direction and step sequences differ in length");
  DiffReport r;
  r.notion = "compact";
  r.base = base;
  r.n_directions = 1;
  r.steps = t_sequence;
  try {
    const Vector f0 = f(base);
    const Vector ah = derivative(h_limit);
    for (std::size_t n = 0; n < t_sequence.size(); ++n) {
      const double t = t_sequence[n];
      r.ratios.push_back(sup(f(base + t * h_sequence[n]) - f0 - t * ah) / t);
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  finish(r, tolerance);
  return r;
}

std::vector<Vector> standard_directions(const GridInterval& grid, int q, int smooth, int rough) {
  std::vector<Vector> out;
  auto push = [&](const std::function<double(double)>& fn, int index) {
    Vector top(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) top[static_cast<Eigen::Index>(i)] = fn(grid.point(i));
    Vector jet(q);
    for (int j = 0; j < q; ++j) jet[j] = std::cos(1.0 + index + j);
    CqElement x(q, grid, jet, top);
    const double n = sup_norm(x);
    x *= 1.0 / n;
    out.push_back(x.coordinates());
  };
  const double len = grid.right() - grid.left();
  auto unit = [&](double t) { return (t - grid.left()) / len; };
  for (int i = 0; i < smooth; ++i) {
    if (i < 5) {
      push([&, i](double t) { return std::pow(unit(t), i) - 0.3 * i; }, i);
    } else {
      const int freq = (i - 5) / 2 + 1;
      const bool use_sin = (i - 5) % 2 == 0;
      push([&, freq, use_sin](double t) {
        const double arg = 2.0 * std::numbers::pi * freq * unit(t);
        return use_sin ? std::sin(arg) : std::cos(arg);
      }, i);
    }
  }
  for (int i = 0; i < rough; ++i) {
    const double freq = 0.25 * static_cast<double>(grid.size()) / (i + 1);
    push([&, freq](double t) { return std::sin(2.0 * std::numbers::pi * freq * unit(t) + 0.5); }, smooth + i);
  }
  return out;
}

VectorMap coordinate_map(std::function<CqElement(const CqElement&)> f, const CqElement& prototype) {
  return [f = std::move(f), prototype](const Vector& c) { return f(prototype.with_coordinates(c)).coordinates(); };
}

}  // namespace blidkit
