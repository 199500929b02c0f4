#pragma once

// Experiments that check the analytical properties of the flow on computed
// trajectories: solution-space norms, Galerkin (Cauchy) convergence across
// levels, sensitivity to initial data, the Lipschitz bracket of F, the
// drift identity for |u|² - 1, and the energy/a-priori estimates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shgal/integrator.hpp"

namespace shgal {

// sup_t ‖u‖²_V and ∫|Au|² dt (trapezoidal over the recorded times).
struct XtComponents {
    double sup_v_sq = 0.0;
    double l2e_sq = 0.0;
    double norm() const;
};

XtComponents xt_components(const Trajectory& trajectory, const EigenData& eigen);
double xt_norm(const Trajectory& trajectory, const EigenData& eigen);

// X_T norm of fine - coarse, with coarse states zero-padded to the fine level.
// Both trajectories must share their recorded times.
double xt_gap(const Trajectory& coarse, const Trajectory& fine, const EigenData& fine_eigen);

struct LevelResult {
    int level = 0;
    bool ok = false;
    std::string error;
    double sup_v = 0.0;            // sup_t ‖u‖_V
    double l2e = 0.0;              // (∫|Au|² dt)^{1/2}
    double dudt_l2_integral = 0.0;  // ∫|du/dt|² dt
    double psi0 = 0.0;
};

struct ConvergenceReport {
    std::vector<int> levels;
    std::vector<LevelResult> per_level;
    // gap between levels[i] and levels[i+1]
    std::vector<double> pairwise_xt_gap;
    // least-squares slope of -ln(gap) against the coarse level
    double fitted_rate = 0.0;
};

// Throws std::invalid_argument unless there are two or more levels, strictly increasing,
// each dividing the next. Solver failures are recorded per level.
ConvergenceReport run_convergence_study(const SpectralState& u0, const std::vector<int>& levels,
                                        const DomainSpec& domain, const SolverConfig& config,
                                        const ModelParams& params);

struct StabilityReport {
    double epsilon = 0.0;
    double initial_gap = 0.0;
    std::vector<double> times;
    std::vector<double> gap_series;
    double max_gap = 0.0;
    // smallest C with gap(t) <= gap(0) e^{Ct} on every recorded t > 0
    double bound_constant = 0.0;
    // least-squares fit ln gap ≈ b + rate t on the window gap >= 100 eps
    double fitted_rate = 0.0;
    double fitted_intercept = 0.0;
    // max |gap_fit/gap - 1| on the fit window
    double fit_relative_residual = 0.0;
    // sqrt(SS_res / SS_tot) of the fit in ln gap
    double fit_log_residual = 0.0;
    bool identical = false;  // trajectories equal bit for bit
};

// Integrates from u0 and from normalize(u0 + ε w), w a random tangent with
// ‖w‖_V = 1 (seeded), and compares them in the V-norm.
StabilityReport run_uniqueness_probe(const SpectralState& u0, double epsilon,
                                     const GalerkinSpace& space, const SolverConfig& config,
                                     const ModelParams& params, std::uint64_t seed);

struct LipschitzStatistics {
    int requested = 0;
    int evaluated = 0;
    int skipped = 0;  // u1 == u2
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    double q50 = 0.0;
    double q90 = 0.0;
    double q99 = 0.0;
    bool finite = true;
};

// Ratio |F(u1) - F(u2)| / (bracket(u1,u2) ‖u1 - u2‖_V) over random pairs
// with ‖u_i‖_V <= radius.
LipschitzStatistics run_lipschitz_probe(int sample_count, double radius, int n, std::uint64_t seed,
                                        const GalerkinSpace& space);

// Ratio for one pair; nullopt when u1 == u2.
std::optional<double> lipschitz_ratio(const SpectralState& u1, const SpectralState& u2, int n,
                                      const GalerkinSpace& space);

struct NuIdentityReport {
    double delta = 0.0;
    double nu = 0.0;           // |u|² - 1
    double dnu_dt = 0.0;       // 2 <-Au + F(u), u>
    double predicted = 0.0;    // 2 (|Δu|² + 2|∇u|² + ‖u‖^{2n}_{L^{2n}}) ν
    double relative_error = 0.0;
};

// Evaluates d/dt (|u|² - 1) for the Galerkin field -Au + F(u) at
// u = sqrt(1 + δ) û, û a unit state.
NuIdentityReport nu_identity(const SpectralState& unit_state, double delta, int n,
                             const GalerkinSpace& space);

struct EnergyReport {
    double max_increase = 0.0;     // max over recorded pairs of Ψ(t_{m+1}) - Ψ(t_m)
    bool non_increasing = true;    // max_increase <= tolerance
    double max_rate_error = 0.0;   // max relative gap between -ΔΨ/Δt and mean |du/dt|²
    int rate_pairs_checked = 0;
};

// Dissipation rate is compared on pairs starting at t >= rate_from whose
// drop |ΔΨ| is at least min_relative_drop * Ψ (smaller drops are rounding).
inline constexpr double kMinRelativeDrop = 1e-9;
EnergyReport check_energy(const Trajectory& trajectory, double tolerance, double rate_from,
                          double min_relative_drop = kMinRelativeDrop);

struct AprioriReport {
    double sup_v_sq = 0.0;
    double sup_v = 0.0;
    double two_psi0 = 0.0;
    bool squared_bound_holds = false;   // sup ‖u‖²_V <= 2Ψ(u(0))
    bool unsquared_bound_holds = false;  // sup ‖u‖_V <= 2Ψ(u(0))
    double l2e_sq = 0.0;                 // ∫|Au|² dt
    double dudt_sq_integral = 0.0;       // ∫|du/dt|² dt
};

AprioriReport check_apriori(const Trajectory& trajectory, const EigenData& eigen);

double max_manifold_residual(const Trajectory& trajectory);

}  // namespace shgal
