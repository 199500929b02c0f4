#include "shgal/random.hpp"

#include <cmath>

#include "shgal/manifold.hpp"

namespace shgal {

SpectralState random_state(int dimension, int level, Rng& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    SpectralState s(dimension, level);
    for (double& c : s.coeffs()) c = dist(rng);
    return s;
}

SpectralState random_unit_state(int dimension, int level, Rng& rng) {
    for (;;) {
        SpectralState s = random_state(dimension, level, rng);
        const double norm = l2_norm(s);
        if (norm > 1e-8) return scaled(s, 1.0 / norm);
    }
}

SpectralState random_initial_datum(const EigenData& eigen, Rng& rng) {
    for (;;) {
        SpectralState s = random_state(eigen.dimension, eigen.level, rng);
        for (std::size_t j = 0; j < s.size(); ++j) s[j] /= 1.0 + eigen.alpha[j];
        const double norm = l2_norm(s);
        if (norm > 1e-8) return scaled(s, 1.0 / norm);
    }
}

SpectralState exponential_profile(int dimension, int level, double decay) {
    SpectralState s(dimension, level);
    for (std::size_t f = 0; f < s.size(); ++f) {
        const ModeIndex mode = mode_at(f, dimension, level);
        const int order = dimension == 1 ? mode.j[0] : mode.j[0] + mode.j[1] - 1;
        s[f] = std::exp(-decay * order);
    }
    return scaled(s, 1.0 / l2_norm(s));
}

SpectralState random_tangent(const SpectralState& u, Rng& rng) {
    for (;;) {
        const SpectralState w = project_tangent(u, random_state(u.dimension(), u.level(), rng)).coeffs;
        const double norm = l2_norm(w);
        if (norm > 1e-8) return scaled(w, 1.0 / norm);
    }
}

}  // namespace shgal
