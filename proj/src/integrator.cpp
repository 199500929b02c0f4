#include "shgal/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "shgal/simd/kernels.hpp"

namespace shgal {

int scheme_order(Scheme scheme) {
    switch (scheme) {
        case Scheme::etd_rk2: return 2;
        case Scheme::etd_rk4: return 4;
        case Scheme::reference_rk_adaptive: return 5;
    }
    return 0;
}

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::etd_rk2: return "etd_rk2";
        case Scheme::etd_rk4: return "etd_rk4";
        case Scheme::reference_rk_adaptive: return "reference_rk_adaptive";
    }
    return "unknown";
}

std::string to_string(Renormalize policy) {
    return policy == Renormalize::off ? "off" : "every_step";
}

void SolverConfig::validate(const ModelParams& params) const {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be > 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
    if (dt > t_end) throw std::invalid_argument("dt must not exceed t_end");
    if (dealias_factor != 0 && dealias_factor < 2 * params.n)
        throw std::invalid_argument("dealias_factor must be >= 2n");
    if (!(tol_manifold > 0.0)) throw std::invalid_argument("tol_manifold must be > 0");
    if (!(tol_energy > 0.0)) throw std::invalid_argument("tol_energy must be > 0");
    if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
    if (!(blowup_v_norm > 0.0)) throw std::invalid_argument("blowup_v_norm must be > 0");
    if (!(reference_tolerance > 0.0)) throw std::invalid_argument("reference_tolerance must be > 0");
}

// ---------------------------------------------------------------------------
// Semi-discrete system

namespace {
SemiDiscreteSystem::Nonlinear swift_hohenberg_nonlinear(const GalerkinSpace& space,
                                                        const ModelParams& params) {
    const GalerkinSpace* sp = &space;
    if (params.mode == Mode::constrained) {
        return [sp, params](const SpectralState& u, bool* generic) {
            return constrained_nonlinear(u, params, *sp, generic);
        };
    }
    return [sp, params](const SpectralState& u, bool* generic) {
        if (generic != nullptr) *generic = false;
        const PowerTerm p = power_term(u, params.n, *sp);
        return combine(-params.a, u, -1.0, p.projected);
    };
}
}  // namespace

SemiDiscreteSystem::SemiDiscreteSystem(const GalerkinSpace& space, const ModelParams& params)
    : SemiDiscreteSystem(space, params, swift_hohenberg_nonlinear(space, params)) {}

SemiDiscreteSystem::SemiDiscreteSystem(const GalerkinSpace& space, const ModelParams& params,
                                       Nonlinear nonlinear)
    : space_(&space), params_(params), nonlinear_(std::move(nonlinear)) {
    params_.validate();
}

SemiDiscreteSystem SemiDiscreteSystem::linear_only(const GalerkinSpace& space,
                                                   const ModelParams& params) {
    return SemiDiscreteSystem(space, params, [](const SpectralState& u, bool* generic) {
        if (generic != nullptr) *generic = false;
        return SpectralState::zero(u.dimension(), u.level());
    });
}

SpectralState SemiDiscreteSystem::nonlinear(const SpectralState& u, bool* used_generic) const {
    return nonlinear_(u, used_generic);
}

SpectralState SemiDiscreteSystem::field(const SpectralState& u, bool* used_generic) const {
    SpectralState out = nonlinear(u, used_generic);
    const auto& alpha = space_->eigen.alpha;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] -= alpha[j] * u[j];
    return out;
}

// ---------------------------------------------------------------------------
// φ-functions

double phi(int order, double z) {
    if (order < 0 || order > 3) throw std::invalid_argument("phi order must be in 0..3");
    if (order == 0) return std::exp(z);
    if (std::abs(z) < kPhiSeriesThreshold) {
        // Σ z^m/(m+l)!; 30 terms reach round-off for |z| < 1.
        double term = 1.0;
        for (int i = 2; i <= order; ++i) term /= i;
        double sum = term;
        for (int m = 1; m < 30; ++m) {
            term *= z / (m + order);
            sum += term;
        }
        return sum;
    }
    const double ez = std::exp(z);
    switch (order) {
        case 1: return (ez - 1.0) / z;
        case 2: return (ez - 1.0 - z) / (z * z);
        default: return (ez - 1.0 - z - 0.5 * z * z) / (z * z * z);
    }
}

// ---------------------------------------------------------------------------
// ETD steppers

EtdStepper::EtdStepper(const SemiDiscreteSystem& system, Scheme scheme, double dt)
    : system_(&system), scheme_(scheme), dt_(dt) {
    if (scheme != Scheme::etd_rk2 && scheme != Scheme::etd_rk4)
        throw std::invalid_argument("EtdStepper supports etd_rk2 and etd_rk4 only");
    const auto& alpha = system.space().eigen.alpha;
    const std::size_t n = alpha.size();
    e_full_.resize(n);
    c1_.resize(n);
    c2_.resize(n);
    if (scheme == Scheme::etd_rk4) {
        e_half_.resize(n);
        q_half_.resize(n);
        c3_.resize(n);
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double z = -alpha[j] * dt;
        e_full_[j] = std::exp(z);
        if (scheme == Scheme::etd_rk2) {
            c1_[j] = dt * phi(1, z);
            c2_[j] = dt * phi(2, z);
        } else {
            const double p1 = phi(1, z), p2 = phi(2, z), p3 = phi(3, z);
            e_half_[j] = std::exp(0.5 * z);
            q_half_[j] = 0.5 * dt * phi(1, 0.5 * z);
            c1_[j] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
            c2_[j] = dt * (p2 - 2.0 * p3);
            c3_[j] = dt * (4.0 * p3 - p2);
        }
    }
}

SpectralState EtdStepper::step(const SpectralState& u, StepStats* stats) const {
    auto eval = [&](const SpectralState& x) {
        bool generic = false;
        SpectralState out = system_->nonlinear(x, &generic);
        if (generic && stats != nullptr) ++stats->generic_projection_evaluations;
        return out;
    };
    const std::size_t n = u.size();
    if (scheme_ == Scheme::etd_rk2) {
        // Cox-Matthews ETD2RK
        const SpectralState nu = eval(u);
        SpectralState a(u.dimension(), u.level());
        for (std::size_t j = 0; j < n; ++j) a[j] = e_full_[j] * u[j] + c1_[j] * nu[j];
        const SpectralState na = eval(a);
        SpectralState out(u.dimension(), u.level());
        for (std::size_t j = 0; j < n; ++j) out[j] = a[j] + c2_[j] * (na[j] - nu[j]);
        return out;
    }
    // Cox-Matthews ETDRK4
    const SpectralState nu = eval(u);
    SpectralState a(u.dimension(), u.level());
    for (std::size_t j = 0; j < n; ++j) a[j] = e_half_[j] * u[j] + q_half_[j] * nu[j];
    const SpectralState na = eval(a);
    SpectralState b(u.dimension(), u.level());
    for (std::size_t j = 0; j < n; ++j) b[j] = e_half_[j] * u[j] + q_half_[j] * na[j];
    const SpectralState nb = eval(b);
    SpectralState c(u.dimension(), u.level());
    for (std::size_t j = 0; j < n; ++j)
        c[j] = e_half_[j] * a[j] + q_half_[j] * (2.0 * nb[j] - nu[j]);
    const SpectralState nc = eval(c);
    SpectralState out(u.dimension(), u.level());
    for (std::size_t j = 0; j < n; ++j)
        out[j] = e_full_[j] * u[j] + c1_[j] * nu[j] + 2.0 * c2_[j] * (na[j] + nb[j]) +
                 c3_[j] * nc[j];
    return out;
}

// ---------------------------------------------------------------------------
// Adaptive Dormand-Prince 5(4)

void adaptive_advance(const FieldFunction& field, SpectralState& u, double t0, double t1,
                      double& h, const AdaptiveOptions& options, AdaptiveStats* stats) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = u.size();
    auto stage = [&](std::initializer_list<std::pair<double, const SpectralState*>> terms,
                     double step) {
        SpectralState y = u;
        for (const auto& [coef, k] : terms)
            for (std::size_t j = 0; j < n; ++j) y[j] += step * coef * (*k)[j];
        return y;
    };

    double t = t0;
    if (!(h > 0.0)) h = std::min(1e-4, t1 - t0);
    double err_prev = 1e-4;
    SpectralState k1 = field(u);
    long steps = 0;
    while (t < t1) {
        if (++steps > options.max_steps) throw StiffnessError("adaptive step budget exhausted", t);
        const bool last = t + h >= t1 - 1e-15 * std::max(1.0, std::abs(t1));
        const double step = last ? t1 - t : h;

        const SpectralState k2 = field(stage({{a21, &k1}}, step));
        const SpectralState k3 = field(stage({{a31, &k1}, {a32, &k2}}, step));
        const SpectralState k4 = field(stage({{a41, &k1}, {a42, &k2}, {a43, &k3}}, step));
        const SpectralState k5 =
            field(stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, step));
        const SpectralState k6 =
            field(stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, step));
        const SpectralState y =
            stage({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, step);
        const SpectralState k7 = field(y);

        double err_sq = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double e = step * (e1 * k1[j] + e3 * k3[j] + e4 * k4[j] + e5 * k5[j] +
                                     e6 * k6[j] + e7 * k7[j]);
            const double scale =
                options.atol + options.rtol * std::max(std::abs(u[j]), std::abs(y[j]));
            err_sq += (e / scale) * (e / scale);
        }
        const double err = std::sqrt(err_sq / static_cast<double>(n));
        if (!std::isfinite(err)) throw StiffnessError("non-finite error estimate", t);

        if (err <= 1.0) {
            t = last ? t1 : t + step;
            u = y;
            k1 = k7;  // FSAL
            if (stats != nullptr) ++stats->accepted;
            // PI controller (Gustafsson), exponents 0.7/5 and 0.4/5.
            const double e = std::max(err, 1e-10);
            double factor = 0.9 * std::pow(e, -0.14) * std::pow(err_prev, 0.08);
            factor = std::clamp(factor, 0.2, 5.0);
            err_prev = e;
            if (!last || step >= h) h = step * factor;
        } else {
            if (stats != nullptr) ++stats->rejected;
            h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
        if (h < options.min_step && t < t1)
            throw StiffnessError("step size fell below " + std::to_string(options.min_step), t);
    }
}

// ---------------------------------------------------------------------------
// Diagnostics

double energy_psi(const SpectralState& u, const GalerkinSpace& space, int n) {
    const Norms nm = norms(u, space.eigen);
    return 0.5 * nm.v * nm.v + power_integral(u, 2 * n, space.grid) / (2.0 * n);
}

Diagnostics compute_diagnostics(const SpectralState& u, double time,
                                const SemiDiscreteSystem& system) {
    const GalerkinSpace& space = system.space();
    const int n = system.params().n;
    const Norms nm = norms(u, space.eigen);
    const double integral = power_integral(u, 2 * n, space.grid);
    Diagnostics d;
    d.time = time;
    d.l2 = nm.l2;
    d.h10 = nm.h10;
    d.h20 = nm.h20;
    d.v = nm.v;
    d.l2n = integral <= 0.0 ? 0.0 : std::pow(integral, 1.0 / (2.0 * n));
    d.psi = 0.5 * nm.v * nm.v + integral / (2.0 * n);
    d.manifold_residual = manifold_residual(u);
    d.dudt_l2 = inner(u, u) > 0.0 ? l2_norm(system.field(u)) : 0.0;
    return d;
}

// ---------------------------------------------------------------------------
// Initialization and stepping

SpectralState init_galerkin(const SpectralState& u0, int level) {
    SpectralState u = change_level(u0, level);
    const double norm = l2_norm(u);
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw InitializationError("truncated initial datum has zero (or non-finite) L2 norm at level " +
                                  std::to_string(level));
    return scaled(u, 1.0 / norm);
}

SpectralState init_galerkin(const GridField& u0, const Collocation& grid) {
    return init_galerkin(from_grid(u0, grid), grid.level());
}

namespace {

void renormalize_if_needed(SpectralState& u, const SolverConfig& config,
                           const SemiDiscreteSystem& system) {
    if (config.renormalize != Renormalize::every_step ||
        system.params().mode != Mode::constrained)
        return;
    const double norm = l2_norm(u);
    if (norm > 0.0) u = scaled(u, 1.0 / norm);
}

// Advances by h with the configured scheme.
class Advancer {
public:
    Advancer(const SolverConfig& config, const SemiDiscreteSystem& system)
        : config_(config), system_(system) {
        if (config.scheme != Scheme::reference_rk_adaptive)
            main_.emplace(system, config.scheme, config.dt);
        options_.rtol = options_.atol = config.reference_tolerance;
    }

    SpectralState advance(const SpectralState& u, double t, double h, StepStats& stats) {
        if (config_.scheme == Scheme::reference_rk_adaptive) {
            SpectralState out = u;
            FieldFunction f = [this, &stats](const SpectralState& x) {
                bool generic = false;
                SpectralState r = system_.field(x, &generic);
                if (generic) ++stats.generic_projection_evaluations;
                return r;
            };
            adaptive_advance(f, out, t, t + h, h_adaptive_, options_);
            return out;
        }
        if (std::abs(h - config_.dt) <= 1e-14 * config_.dt) return main_->step(u, &stats);
        if (!tail_ || std::abs(tail_->dt() - h) > 1e-14 * h) tail_.emplace(system_, config_.scheme, h);
        return tail_->step(u, &stats);
    }

private:
    const SolverConfig& config_;
    const SemiDiscreteSystem& system_;
    std::optional<EtdStepper> main_;
    std::optional<EtdStepper> tail_;
    AdaptiveOptions options_;
    double h_adaptive_ = 0.0;
};

}  // namespace

SpectralState step(const SpectralState& u, const SolverConfig& config,
                   const SemiDiscreteSystem& system) {
    Advancer advancer(config, system);
    StepStats stats;
    SpectralState out = advancer.advance(u, 0.0, config.dt, stats);
    if (!out.all_finite()) throw DivergenceError("non-finite state after one step", 0.0, {});
    renormalize_if_needed(out, config, system);
    return out;
}

Trajectory integrate(const SpectralState& u0, const SolverConfig& config,
                     const SemiDiscreteSystem& system) {
    config.validate(system.params());
    const GalerkinSpace& space = system.space();
    SpectralState u = init_galerkin(u0, space.level);

    const double ratio = config.t_end / config.dt;
    long n_steps = std::lround(ratio);
    if (std::abs(static_cast<double>(n_steps) - ratio) > 1e-9 * std::max(1.0, ratio))
        n_steps = static_cast<long>(std::ceil(ratio));
    n_steps = std::max(n_steps, 1L);

    Trajectory traj;
    auto record = [&](const SpectralState& state, double t) {
        traj.times.push_back(t);
        traj.states.push_back(state);
        traj.diagnostics.push_back(compute_diagnostics(state, t, system));
    };
    record(u, 0.0);

    Advancer advancer(config, system);
    StepStats stats;
    double t = 0.0;
    for (long i = 1; i <= n_steps; ++i) {
        const double t_next = i == n_steps ? config.t_end : static_cast<double>(i) * config.dt;
        SpectralState next = advancer.advance(u, t, t_next - t, stats);
        renormalize_if_needed(next, config, system);
        traj.steps_taken = static_cast<int>(i);
        traj.generic_projection_evaluations = stats.generic_projection_evaluations;
        if (!next.all_finite())
            throw DivergenceError("non-finite state at t = " + std::to_string(t_next), t,
                                  std::move(traj));
        const double v = norms(next, space.eigen).v;
        if (v > config.blowup_v_norm)
            throw DivergenceError("V-norm " + std::to_string(v) + " exceeds blow-up bound at t = " +
                                      std::to_string(t_next),
                                  t, std::move(traj));
        u = std::move(next);
        t = t_next;
        if (i % config.record_stride == 0 || i == n_steps) record(u, t);
    }
    return traj;
}

Trajectory integrate(const SpectralState& u0, const SolverConfig& config,
                     const ModelParams& params, const GalerkinSpace& space) {
    const SemiDiscreteSystem system(space, params);
    return integrate(u0, config, system);
}

double estimate_time_derivative(const Trajectory& trajectory, std::size_t index,
                                const SemiDiscreteSystem& system) {
    return l2_norm(system.field(trajectory.states.at(index)));
}

}  // namespace shgal
