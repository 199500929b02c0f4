#pragma once

// Brute-force reference evaluations, independent of the fast path except for
// the eigenvalue formula: Gauss-Legendre quadrature instead of the uniform
// sine grid, basis functions and derivatives evaluated directly with
// std::sin/std::cos, every inner product an explicit node sum.

#include <vector>

#include "shgal/integrator.hpp"

namespace shgal {

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Newton iteration on P_q from Chebyshev initial guesses.
GaussLegendre gauss_legendre(int points);

class DenseOracle {
public:
    // quad_points per axis; must be >= 4 * n * level (four times the
    // dealiasing minimum) or std::invalid_argument is thrown.
    DenseOracle(const DomainSpec& domain, int level, int n, int quad_points);

    // Default resolution: 4 * (2 n k) + 32 points per axis.
    static int default_points(int level, int n) { return 8 * n * level + 32; }

    int level() const noexcept { return level_; }
    int quad_points() const noexcept { return quad_points_; }

    // Constrained: -Au + (|Δu|² + 2|∇u|² + ∫u^{2n}) u - π_k u^{2n-1}.
    // Unconstrained: -Au - a u - π_k u^{2n-1}.
    SpectralState rhs(const SpectralState& u, const ModelParams& params) const;

    // |u|², |∇u|², |Δu|², ∫u^{2n} by quadrature.
    struct Integrals {
        double l2_sq, grad_sq, lap_sq, power_2n;
    };
    Integrals integrals(const SpectralState& u) const;

private:
    DomainSpec domain_;
    int level_;
    int n_;
    int quad_points_;
    EigenData eigen_;
    // per axis: node positions, weights, sin/cos tables (q x k)
    std::vector<double> x_[2], w_[2], sin_[2], dcos_[2];
    std::vector<double> mu_axis_[2];

    struct NodalFields {
        std::vector<double> u, ux, uy, lap, bilap;
    };
    NodalFields evaluate(const SpectralState& u) const;
    SpectralState project(const std::vector<double>& values) const;
};

SpectralState dense_rhs_oracle(const SpectralState& u, const ModelParams& params,
                               const DomainSpec& domain, int quad_points);

// Adaptive Dormand-Prince integration of the dense-oracle field at
// tolerance config.reference_tolerance, recorded on the same time grid as
// integrate() (steps of config.dt, every config.record_stride). No
// renormalization. Requires level <= 8.
Trajectory reference_trajectory(const SpectralState& u0, const SolverConfig& config,
                                const ModelParams& params, const GalerkinSpace& space);

}  // namespace shgal
