#include "blidkit/sampling.hpp"

#include <cmath>
#include <numbers>

namespace blidkit {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

Rng make_stream(std::uint64_t seed, std::string_view label) { return make_stream(seed, fnv1a(label)); }

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

CqElement random_rough_element(Rng& rng, const GridInterval& grid, int q, double radius, std::size_t anchor) {
  Vector jet(q);
  for (int j = 0; j < q; ++j) jet[j] = uniform(rng, -radius, radius);
  Vector top(static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index i = 0; i < top.size(); ++i) top[i] = uniform(rng, -radius, radius);
  return CqElement(q, grid, std::move(jet), std::move(top), anchor);
}

CqElement random_smooth_function(Rng& rng, const GridInterval& grid, double amplitude) {
  constexpr int kModes = 4;
  double c[kModes], s[kModes];
  for (int m = 0; m < kModes; ++m) {
    c[m] = uniform(rng, -1.0, 1.0) / (m + 1);
    s[m] = uniform(rng, -1.0, 1.0) / (m + 1);
  }
  const double offset = uniform(rng, -1.0, 1.0);
  return CqElement::from_function(grid, [&](double t) {
    double v = offset;
    for (int m = 0; m < kModes; ++m) {
      const double w = std::numbers::pi * (m + 1);
      v += c[m] * std::cos(w * t) + s[m] * std::sin(w * t);
    }
    return amplitude * v;
  });
}

CqElement random_element_with_norm(Rng& rng, const GridInterval& grid, int q, double norm, bool smooth) {
  CqElement x = smooth && q == 0 ? random_smooth_function(rng, grid, 1.0) : random_rough_element(rng, grid, q, 1.0);
  const double current = sup_norm(x);
  if (current == 0.0) return x;
  x *= norm / current;
  return x;
}

Vector random_vector(Rng& rng, Eigen::Index d, double radius) {
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = uniform(rng, -radius, radius);
  return v;
}

Vector random_unit_vector(Rng& rng, Eigen::Index d) {
  Vector v = random_vector(rng, d, 1.0);
  const double m = v.cwiseAbs().maxCoeff();
  return m > 0.0 ? Vector(v / m) : Vector(Vector::Unit(d, 0));
}

}  // namespace blidkit
