#pragma once

// Unit sphere M = {u : |u|_{L²} = 1} in coefficient space, its tangent
// projection, and the projected Swift-Hohenberg vector field.

#include "shgal/operators.hpp"

namespace shgal {

// Bases farther than this from the sphere (in | |u|² - 1 |) are flagged
// by project_tangent and routed to the generic projection by the solver.
inline constexpr double kManifoldBand = 1e-10;

struct TangentVector {
    SpectralState coeffs;
    // |u|² - 1 at the base point; nonzero values outside kManifoldBand mean
    // the caller projected at an off-manifold base.
    double base_drift = 0.0;

    bool base_on_manifold() const noexcept {
        return base_drift <= kManifoldBand && base_drift >= -kManifoldBand;
    }
};

// | Σ c_j² - 1 |
double manifold_residual(const SpectralState& u);

// v - (<v,u>/<u,u>) u. Equals v - <v,u> u on the sphere and stays an
// orthogonal projection for any u != 0. Throws DegenerateBaseError at u = 0.
TangentVector project_tangent(const SpectralState& u, const SpectralState& v);

// Closed form of π_u(-Δ²u + 2Δu - au - u^{2n-1}) for |u| = 1:
//   -Au + (|Δu|² + 2|∇u|² + ‖u‖_{L^{2n}}^{2n}) u - π_k u^{2n-1}.
// params.a is never read.
SpectralState projected_rhs(const SpectralState& u, const ModelParams& params,
                            const GalerkinSpace& space);

// Nonlinear part N(u) of the constrained field, so that the field equals
// -Au + N(u). Same branch logic and a-independence as constrained_field.
SpectralState constrained_nonlinear(const SpectralState& u, const ModelParams& params,
                                    const GalerkinSpace& space, bool* used_generic = nullptr);

// Vector field integrated in constrained mode: the closed form while u is
// within kManifoldBand of the sphere, otherwise the generic projection of
// the a-free field -Au - π_k u^{2n-1}. Also independent of params.a.
// Sets *used_generic (when given) to report which branch ran.
SpectralState constrained_field(const SpectralState& u, const ModelParams& params,
                                const GalerkinSpace& space, bool* used_generic = nullptr);

}  // namespace shgal
