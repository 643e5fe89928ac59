#pragma once

#include <cstdint>
#include <random>

#include "fhgeo/domain.hpp"
#include "fhgeo/types.hpp"

namespace fhgeo {

std::uint64_t splitmix64(std::uint64_t state);

/// Per-sample random stream derived from (seed, index); results are
/// independent of evaluation order.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

Vec unit_sphere_sample(std::mt19937_64& rng, int n);

Vec box_sample(std::mt19937_64& rng, const Vec& lo, const Vec& hi);

/// Rejection-sample an interior point whose axis chords all clear the
/// boundary by margin_frac * diameter.
Vec sample_interior(const ConvexBody& body, std::mt19937_64& rng, double margin_frac);

} // namespace fhgeo
