#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "blidkit/function_space.hpp"

namespace blidkit {

using Rng = std::mt19937_64;

/// Independent deterministic stream for (seed, stream label).
Rng make_stream(std::uint64_t seed, std::string_view label);
Rng make_stream(std::uint64_t seed, std::uint64_t index);

/// Magnitude strata used by all certificates: plateau, transition and
/// support-exterior regimes of the default bump.
inline constexpr double kStrata[] = {0.1, 1.0, 10.0, 100.0};

double uniform(Rng& rng, double lo, double hi);

/// Jet entries and top samples drawn independently from [-radius, radius].
CqElement random_rough_element(Rng& rng, const GridInterval& grid, int q, double radius, std::size_t anchor = 0);

/// Random trigonometric polynomial with low frequencies; q = 0.
CqElement random_smooth_function(Rng& rng, const GridInterval& grid, double amplitude);

/// Random element rescaled so that sup_norm(x) equals `norm` exactly.
CqElement random_element_with_norm(Rng& rng, const GridInterval& grid, int q, double norm, bool smooth = false);

Vector random_vector(Rng& rng, Eigen::Index d, double radius);

/// Random vector of sup-norm exactly 1.
Vector random_unit_vector(Rng& rng, Eigen::Index d);

}  // namespace blidkit
