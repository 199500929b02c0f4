#pragma once

#include <cstdint>
#include <random>

#include "shgal/spectral.hpp"

namespace shgal {

using Rng = std::mt19937_64;

// Coefficients i.i.d. uniform on [-1, 1].
SpectralState random_state(int dimension, int level, Rng& rng);

// random_state scaled to unit L² norm.
SpectralState random_unit_state(int dimension, int level, Rng& rng);

// Random initial datum: i.i.d. uniform ξ_j scaled by 1/(1 + α_j), then
// normalized to the unit sphere. Its V-norm stays bounded as k grows.
SpectralState random_initial_datum(const EigenData& eigen, Rng& rng);

// Coefficients ∝ exp(-decay * (j1 + j2 - dimension + 1)), normalized.
SpectralState exponential_profile(int dimension, int level, double decay);

// Unit (L²) vector orthogonal to u, drawn from random_state.
SpectralState random_tangent(const SpectralState& u, Rng& rng);

}  // namespace shgal
