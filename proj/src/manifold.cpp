#include "shgal/manifold.hpp"

#include <cmath>

namespace shgal {

double manifold_residual(const SpectralState& u) { return std::abs(inner(u, u) - 1.0); }

TangentVector project_tangent(const SpectralState& u, const SpectralState& v) {
    const double uu = inner(u, u);
    if (!(uu > 0.0)) throw DegenerateBaseError("tangent projection at the zero state");
    const double vu = inner(v, u);
    return TangentVector{combine(1.0, v, -vu / uu, u), uu - 1.0};
}

SpectralState projected_rhs(const SpectralState& u, const ModelParams& params,
                            const GalerkinSpace& space) {
    if (!(inner(u, u) > 0.0)) throw DegenerateBaseError("projected right-hand side at u = 0");
    const PowerTerm p = power_term(u, params.n, space);
    const double scalar = energy_A(u, space.eigen) + p.integral_2n;
    SpectralState out(u.dimension(), u.level());
    const auto& alpha = space.eigen.alpha;
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = (scalar - alpha[j]) * u[j] - p.projected[j];
    return out;
}

SpectralState constrained_nonlinear(const SpectralState& u, const ModelParams& params,
                                    const GalerkinSpace& space, bool* used_generic) {
    const double uu = inner(u, u);
    if (!(uu > 0.0)) throw DegenerateBaseError("constrained field at u = 0");
    const bool generic = std::abs(uu - 1.0) > kManifoldBand;
    if (used_generic != nullptr) *used_generic = generic;

    // off the band: scalar / <u,u> gives the orthogonal projection
    const PowerTerm p = power_term(u, params.n, space);
    double scalar = energy_A(u, space.eigen) + p.integral_2n;
    if (generic) scalar /= uu;
    return combine(scalar, u, -1.0, p.projected);
}

SpectralState constrained_field(const SpectralState& u, const ModelParams& params,
                                const GalerkinSpace& space, bool* used_generic) {
    const double uu = inner(u, u);
    if (!(uu > 0.0)) throw DegenerateBaseError("constrained field at u = 0");
    if (std::abs(uu - 1.0) <= kManifoldBand) {
        if (used_generic != nullptr) *used_generic = false;
        return projected_rhs(u, params, space);
    }
    SpectralState out = constrained_nonlinear(u, params, space, used_generic);
    const auto& alpha = space.eigen.alpha;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] -= alpha[j] * u[j];
    return out;
}

}  // namespace shgal
