#pragma once

// Linear operator A = Δ² - 2Δ, its pseudo-inverse, the nonlinearity
//   F(u) = |Δu|² u + 2|∇u|² u + ‖u‖_{L^{2n}}^{2n} u - u^{2n-1}
// and the unconstrained right-hand side -Au - a u - u^{2n-1}.
// Power terms are formed pointwise on the collocation grid and projected
// back to level k with the exact grid quadrature, which is π_k.

#include "shgal/spectral.hpp"

namespace shgal {

enum class Mode { constrained, unconstrained };

struct ModelParams {
    int n = 1;       // exponent of the power term u^{2n-1}
    double a = 0.0;  // linear coefficient; unused in constrained mode
    Mode mode = Mode::constrained;

    void validate() const;
    int power() const noexcept { return 2 * n - 1; }
};

SpectralState apply_A(const SpectralState& u, const EigenData& eigen);

// (A†u)_j = c_j/α_j, with the zero-eigenvalue branch mapped to 0.
SpectralState apply_A_pseudo_inverse(const SpectralState& u, const EigenData& eigen);

// π_k(u^{2n-1}) together with ∫u^{2n}, both from one grid evaluation so
// the two quantities are consistent with each other.
struct PowerTerm {
    SpectralState projected;
    double integral_2n = 0.0;
};

PowerTerm power_term(const SpectralState& u, int n, const GalerkinSpace& space);

// Σ α_j c_j² = |Δu|² + 2|∇u|²
double energy_A(const SpectralState& u, const EigenData& eigen);

SpectralState nonlinearity_F(const SpectralState& u, int n, const GalerkinSpace& space);

SpectralState unconstrained_rhs(const SpectralState& u, const ModelParams& params,
                                const GalerkinSpace& space);

// Bracket multiplying |u1 - u2|_V in the local Lipschitz estimate of F.
double lipschitz_bracket(double v_norm_1, double v_norm_2, int n);
double lipschitz_bracket(const SpectralState& u1, const SpectralState& u2, int n,
                         const EigenData& eigen);

}  // namespace shgal
