#include "shgal/operators.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "shgal/simd/kernels.hpp"

namespace shgal {

void ModelParams::validate() const {
    if (n < 1) throw std::invalid_argument("nonlinearity exponent n must be >= 1");
    if (!std::isfinite(a)) throw std::invalid_argument("linear coefficient a must be finite");
}

SpectralState apply_A(const SpectralState& u, const EigenData& eigen) {
    SpectralState out(u.dimension(), u.level());
    simd::active_kernels().multiply(eigen.alpha.data(), u.coeffs().data(), out.coeffs().data(),
                                    u.size());
    return out;
}

SpectralState apply_A_pseudo_inverse(const SpectralState& u, const EigenData& eigen) {
    SpectralState out(u.dimension(), u.level());
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double lambda = eigen.alpha[j];
        // Navier spectrum on a rectangle has no kernel.
        assert(lambda != 0.0);
        out[j] = lambda != 0.0 ? u[j] / lambda : 0.0;
    }
    return out;
}

PowerTerm power_term(const SpectralState& u, int n, const GalerkinSpace& space) {
    const Collocation& grid = space.grid;
    grid.require_exact(2 * n * space.level, "power term");
    const auto& kern = simd::active_kernels();
    GridField field = to_grid(u, grid);
    const double h = field.dimension == 1 ? grid.weight(0) : grid.weight(0) * grid.weight(1);

    PowerTerm out;
    out.integral_2n =
        h * kern.sum_power(field.values.data(), field.values.size(), static_cast<unsigned>(2 * n));
    if (n > 1)
        kern.power(field.values.data(), field.values.data(), field.values.size(),
                   static_cast<unsigned>(2 * n - 1));
    out.projected = from_grid(field, grid);
    return out;
}

double energy_A(const SpectralState& u, const EigenData& eigen) {
    return simd::weighted_sum_squares(eigen.alpha, u.coeffs());
}

SpectralState nonlinearity_F(const SpectralState& u, int n, const GalerkinSpace& space) {
    const PowerTerm p = power_term(u, n, space);
    const double scalar = energy_A(u, space.eigen) + p.integral_2n;
    return combine(scalar, u, -1.0, p.projected);
}

SpectralState unconstrained_rhs(const SpectralState& u, const ModelParams& params,
                                const GalerkinSpace& space) {
    const PowerTerm p = power_term(u, params.n, space);
    SpectralState out = apply_A(u, space.eigen);
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = -out[j] - params.a * u[j] - p.projected[j];
    return out;
}

double lipschitz_bracket(double v1, double v2, int n) {
    const double quadratic = v1 * v1 + v2 * v2 + v1 * v2;
    const double odd = (std::pow(v1, 2 * n - 1) + std::pow(v2, 2 * n - 1)) * (v1 + v2);
    const double even = std::pow(v1, 2 * n) + std::pow(v2, 2 * n);
    const double root = std::cbrt(1.0 + v1 * v1 + v2 * v2);
    return quadratic + odd + even + root;
}

double lipschitz_bracket(const SpectralState& u1, const SpectralState& u2, int n,
                         const EigenData& eigen) {
    return lipschitz_bracket(norms(u1, eigen).v, norms(u2, eigen).v, n);
}

}  // namespace shgal
