#pragma once

// Time integration of the level-k Galerkin system
//     du/dt = -A u + N(u),   u(0) = π_k u0 / |π_k u0|
// where N is the constrained (projected) or unconstrained nonlinearity.
// The stiff diagonal part -A is integrated exactly through exponential
// factors; N is handled by exponential Runge-Kutta quadrature (ETD-RK2 or
// ETD-RK4). An adaptive Dormand-Prince 5(4) scheme on the full field is
// available as a reference for small k.

#include <functional>
#include <string>
#include <vector>

#include "shgal/manifold.hpp"

namespace shgal {

enum class Scheme { etd_rk2, etd_rk4, reference_rk_adaptive };
enum class Renormalize { off, every_step };

int scheme_order(Scheme scheme);
std::string to_string(Scheme scheme);
std::string to_string(Renormalize policy);

struct SolverConfig {
    double t_end = 1.0;
    double dt = 1e-3;
    Scheme scheme = Scheme::etd_rk2;
    Renormalize renormalize = Renormalize::every_step;
    int dealias_factor = 0;  // 0 selects 2n
    double tol_manifold = 1e-6;
    double tol_energy = 1e-8;
    int record_stride = 1;
    double blowup_v_norm = 1e6;
    double reference_tolerance = 1e-10;

    int effective_dealias_factor(const ModelParams& params) const {
        return dealias_factor > 0 ? dealias_factor : 2 * params.n;
    }
    // Throws std::invalid_argument naming the offending field.
    void validate(const ModelParams& params) const;
};

// du/dt = L u + N(u) with L = diag(-α_j).
class SemiDiscreteSystem {
public:
    using Nonlinear = std::function<SpectralState(const SpectralState&, bool* used_generic)>;

    // Swift-Hohenberg system for params.mode.
    SemiDiscreteSystem(const GalerkinSpace& space, const ModelParams& params);
    // Custom nonlinearity (test hook).
    SemiDiscreteSystem(const GalerkinSpace& space, const ModelParams& params, Nonlinear nonlinear);
    // N ≡ 0: pure linear decay.
    static SemiDiscreteSystem linear_only(const GalerkinSpace& space, const ModelParams& params);

    const GalerkinSpace& space() const noexcept { return *space_; }
    const ModelParams& params() const noexcept { return params_; }

    SpectralState nonlinear(const SpectralState& u, bool* used_generic = nullptr) const;
    SpectralState field(const SpectralState& u, bool* used_generic = nullptr) const;

private:
    const GalerkinSpace* space_;
    ModelParams params_;
    Nonlinear nonlinear_;
};

// φ_l(z) = Σ_{m>=0} z^m/(m+l)!, l = 0..3. Taylor series for |z| below
// kPhiSeriesThreshold, closed forms otherwise.
inline constexpr double kPhiSeriesThreshold = 1.0;
double phi(int order, double z);

struct StepStats {
    int generic_projection_evaluations = 0;
};

class EtdStepper {
public:
    // scheme must be etd_rk2 or etd_rk4.
    EtdStepper(const SemiDiscreteSystem& system, Scheme scheme, double dt);

    double dt() const noexcept { return dt_; }
    SpectralState step(const SpectralState& u, StepStats* stats = nullptr) const;

private:
    const SemiDiscreteSystem* system_;
    Scheme scheme_;
    double dt_;
    std::vector<double> e_full_, e_half_;
    std::vector<double> c1_, c2_, c3_, q_half_;
};

struct Diagnostics {
    double time = 0.0;
    double l2 = 0.0;
    double h10 = 0.0;
    double h20 = 0.0;
    double v = 0.0;
    double l2n = 0.0;  // ‖u‖_{L^{2n}}
    double psi = 0.0;  // ½‖u‖²_V + (1/2n)‖u‖^{2n}_{L^{2n}}
    double manifold_residual = 0.0;
    double dudt_l2 = 0.0;
};

Diagnostics compute_diagnostics(const SpectralState& u, double time,
                                const SemiDiscreteSystem& system);

// Ψ(u) = ½‖u‖²_V + (1/2n)∫u^{2n}
double energy_psi(const SpectralState& u, const GalerkinSpace& space, int n);

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralState> states;
    std::vector<Diagnostics> diagnostics;
    int steps_taken = 0;
    int generic_projection_evaluations = 0;

    bool empty() const noexcept { return times.empty(); }
    std::size_t size() const noexcept { return times.size(); }
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double last_good_time, Trajectory partial)
        : Error(what), last_good_time_(last_good_time), partial_(std::move(partial)) {}
    double last_good_time() const noexcept { return last_good_time_; }
    const Trajectory& partial() const noexcept { return partial_; }

private:
    double last_good_time_;
    Trajectory partial_;
};

// Truncate (or zero-pad) to the level and normalize to unit L² norm.
// Throws InitializationError when the truncation vanishes.
SpectralState init_galerkin(const SpectralState& u0, int level);
SpectralState init_galerkin(const GridField& u0, const Collocation& grid);

// One step of size config.dt with renormalization per config and params.
SpectralState step(const SpectralState& u, const SolverConfig& config,
                   const SemiDiscreteSystem& system);

Trajectory integrate(const SpectralState& u0, const SolverConfig& config,
                     const SemiDiscreteSystem& system);
Trajectory integrate(const SpectralState& u0, const SolverConfig& config,
                     const ModelParams& params, const GalerkinSpace& space);

// |du/dt|_{L²} at a recorded state, from the vector field.
double estimate_time_derivative(const Trajectory& trajectory, std::size_t index,
                                const SemiDiscreteSystem& system);

// Adaptive Dormand-Prince 5(4) with PI step control. Advances u from t0 to
// t1 exactly; h carries the step-size guess between calls. Throws
// StiffnessError when the step falls below min_step.
struct AdaptiveOptions {
    double rtol = 1e-10;
    double atol = 1e-10;
    double min_step = 1e-13;
    long max_steps = 50'000'000;
};

using FieldFunction = std::function<SpectralState(const SpectralState&)>;

struct AdaptiveStats {
    long accepted = 0;
    long rejected = 0;
};

void adaptive_advance(const FieldFunction& field, SpectralState& u, double t0, double t1,
                      double& h, const AdaptiveOptions& options, AdaptiveStats* stats = nullptr);

}  // namespace shgal
