#include "shgal/probes.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "shgal/random.hpp"

namespace shgal {

double XtComponents::norm() const { return std::sqrt(sup_v_sq + l2e_sq); }

namespace {

double a_norm_sq(const SpectralState& u, const EigenData& eigen) {
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += (eigen.alpha[j] * u[j]) * (eigen.alpha[j] * u[j]);
    return s;
}

template <class Values>
double trapezoid(const std::vector<double>& times, const Values& values) {
    double s = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i)
        s += 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
    return s;
}

XtComponents xt_of_states(const std::vector<double>& times, const std::vector<SpectralState>& states,
                          const EigenData& eigen) {
    XtComponents out;
    std::vector<double> a_sq(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const double v = norms(states[i], eigen).v;
        out.sup_v_sq = std::max(out.sup_v_sq, v * v);
        a_sq[i] = a_norm_sq(states[i], eigen);
    }
    out.l2e_sq = trapezoid(times, a_sq);
    return out;
}

}  // namespace

XtComponents xt_components(const Trajectory& trajectory, const EigenData& eigen) {
    return xt_of_states(trajectory.times, trajectory.states, eigen);
}

double xt_norm(const Trajectory& trajectory, const EigenData& eigen) {
    return xt_components(trajectory, eigen).norm();
}

double xt_gap(const Trajectory& coarse, const Trajectory& fine, const EigenData& fine_eigen) {
    if (coarse.size() != fine.size())
        throw std::invalid_argument("trajectories have different numbers of records");
    std::vector<SpectralState> diff;
    diff.reserve(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
        if (std::abs(coarse.times[i] - fine.times[i]) > 1e-12 * std::max(1.0, fine.times[i]))
            throw std::invalid_argument("trajectories are recorded at different times");
        diff.push_back(combine(1.0, fine.states[i], -1.0, change_level(coarse.states[i], fine_eigen.level)));
    }
    return xt_of_states(fine.times, diff, fine_eigen).norm();
}

// ---------------------------------------------------------------------------

ConvergenceReport run_convergence_study(const SpectralState& u0, const std::vector<int>& levels,
                                        const DomainSpec& domain, const SolverConfig& config,
                                        const ModelParams& params) {
    if (levels.size() < 2) throw std::invalid_argument("convergence study needs at least two levels");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] < 1) throw std::invalid_argument("levels must be >= 1");
        if (i > 0 && (levels[i] <= levels[i - 1] || levels[i] % levels[i - 1] != 0))
            throw std::invalid_argument("levels must increase and each must divide the next");
    }

    ConvergenceReport report;
    report.levels = levels;
    std::vector<std::optional<Trajectory>> trajectories;
    std::vector<GalerkinSpace> spaces;
    spaces.reserve(levels.size());
    for (int k : levels) {
        spaces.emplace_back(domain, k, config.effective_dealias_factor(params));
        const GalerkinSpace& space = spaces.back();
        LevelResult result;
        result.level = k;
        try {
            const SemiDiscreteSystem system(space, params);
            Trajectory traj = integrate(u0, config, system);
            const XtComponents xt = xt_components(traj, space.eigen);
            result.ok = true;
            result.sup_v = std::sqrt(xt.sup_v_sq);
            result.l2e = std::sqrt(xt.l2e_sq);
            std::vector<double> dudt_sq(traj.size());
            for (std::size_t i = 0; i < traj.size(); ++i)
                dudt_sq[i] = traj.diagnostics[i].dudt_l2 * traj.diagnostics[i].dudt_l2;
            result.dudt_l2_integral = trapezoid(traj.times, dudt_sq);
            result.psi0 = traj.diagnostics.front().psi;
            trajectories.emplace_back(std::move(traj));
        } catch (const Error& e) {
            result.error = e.what();
            trajectories.emplace_back(std::nullopt);
        }
        report.per_level.push_back(result);
    }

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        double gap = std::numeric_limits<double>::quiet_NaN();
        if (trajectories[i] && trajectories[i + 1])
            gap = xt_gap(*trajectories[i], *trajectories[i + 1], spaces[i + 1].eigen);
        report.pairwise_xt_gap.push_back(gap);
        if (std::isfinite(gap) && gap > 0.0) {
            xs.push_back(levels[i]);
            ys.push_back(std::log(gap));
        }
    }
    report.fitted_rate = std::numeric_limits<double>::quiet_NaN();
    if (xs.size() >= 2) {
        const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
        const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxy += (xs[i] - mx) * (ys[i] - my);
            sxx += (xs[i] - mx) * (xs[i] - mx);
        }
        report.fitted_rate = -sxy / sxx;
    }
    return report;
}

// ---------------------------------------------------------------------------

StabilityReport run_uniqueness_probe(const SpectralState& u0, double epsilon,
                                     const GalerkinSpace& space, const SolverConfig& config,
                                     const ModelParams& params, std::uint64_t seed) {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("perturbation size must be >= 0");
    const SpectralState base = init_galerkin(u0, space.level);
    Rng rng(seed);
    SpectralState direction = project_tangent(base, random_initial_datum(space.eigen, rng)).coeffs;
    while (!(norms(direction, space.eigen).v > 1e-8))
        direction = project_tangent(base, random_initial_datum(space.eigen, rng)).coeffs;
    direction = scaled(direction, 1.0 / norms(direction, space.eigen).v);
    SpectralState perturbed = combine(1.0, base, epsilon, direction);
    perturbed = scaled(perturbed, 1.0 / l2_norm(perturbed));

    const SemiDiscreteSystem system(space, params);
    const Trajectory first = integrate(base, config, system);
    const Trajectory second = integrate(perturbed, config, system);

    StabilityReport report;
    report.epsilon = epsilon;
    report.times = first.times;
    report.identical = first.states == second.states;
    for (std::size_t i = 0; i < first.size(); ++i) {
        const double gap = norms(combine(1.0, first.states[i], -1.0, second.states[i]), space.eigen).v;
        report.gap_series.push_back(gap);
        report.max_gap = std::max(report.max_gap, gap);
    }
    report.initial_gap = report.gap_series.front();
    if (report.initial_gap <= 0.0) return report;

    double bound = -std::numeric_limits<double>::infinity();
    std::vector<double> ts, logs;
    for (std::size_t i = 0; i < report.times.size(); ++i) {
        const double t = report.times[i];
        const double gap = report.gap_series[i];
        if (t > 0.0) bound = std::max(bound, std::log(gap / report.initial_gap) / t);
        if (gap >= 100.0 * DBL_EPSILON) {
            ts.push_back(t);
            logs.push_back(std::log(gap));
        }
    }
    report.bound_constant = std::isfinite(bound) ? bound : 0.0;
    if (ts.size() >= 2) {
        const double mt = std::accumulate(ts.begin(), ts.end(), 0.0) / ts.size();
        const double ml = std::accumulate(logs.begin(), logs.end(), 0.0) / logs.size();
        double stl = 0.0, stt = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            stl += (ts[i] - mt) * (logs[i] - ml);
            stt += (ts[i] - mt) * (ts[i] - mt);
        }
        report.fitted_rate = stl / stt;
        report.fitted_intercept = ml - report.fitted_rate * mt;
        double ss_res = 0.0, ss_tot = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double fit = report.fitted_intercept + report.fitted_rate * ts[i];
            report.fit_relative_residual =
                std::max(report.fit_relative_residual, std::abs(std::exp(fit - logs[i]) - 1.0));
            ss_res += (logs[i] - fit) * (logs[i] - fit);
            ss_tot += (logs[i] - ml) * (logs[i] - ml);
        }
        report.fit_log_residual = ss_tot > 0.0 ? std::sqrt(ss_res / ss_tot) : 0.0;
    }
    return report;
}

// ---------------------------------------------------------------------------

std::optional<double> lipschitz_ratio(const SpectralState& u1, const SpectralState& u2, int n,
                                      const GalerkinSpace& space) {
    const SpectralState diff = combine(1.0, u1, -1.0, u2);
    const double diff_v = norms(diff, space.eigen).v;
    if (diff_v == 0.0) return std::nullopt;
    const SpectralState df =
        combine(1.0, nonlinearity_F(u1, n, space), -1.0, nonlinearity_F(u2, n, space));
    return l2_norm(df) / (lipschitz_bracket(u1, u2, n, space.eigen) * diff_v);
}

LipschitzStatistics run_lipschitz_probe(int sample_count, double radius, int n, std::uint64_t seed,
                                        const GalerkinSpace& space) {
    if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&]() {
        SpectralState u = random_state(space.dimension(), space.level, rng);
        const double v = norms(u, space.eigen).v;
        const double target = radius * (1.0 - unit(rng));  // (0, radius]
        return v > 0.0 ? scaled(u, target / v) : u;
    };

    LipschitzStatistics stats;
    stats.requested = sample_count;
    std::vector<double> ratios;
    ratios.reserve(static_cast<std::size_t>(sample_count));
    for (int s = 0; s < sample_count; ++s) {
        const SpectralState u1 = draw();
        const SpectralState u2 = draw();
        const auto r = lipschitz_ratio(u1, u2, n, space);
        if (!r) {
            ++stats.skipped;
            continue;
        }
        if (!std::isfinite(*r)) stats.finite = false;
        ratios.push_back(*r);
    }
    stats.evaluated = static_cast<int>(ratios.size());
    if (ratios.empty()) return stats;
    std::sort(ratios.begin(), ratios.end());
    auto quantile = [&](double q) {
        const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(ratios.size() - 1)));
        return ratios[idx];
    };
    stats.max_ratio = ratios.back();
    stats.mean_ratio = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();
    stats.q50 = quantile(0.5);
    stats.q90 = quantile(0.9);
    stats.q99 = quantile(0.99);
    return stats;
}

// ---------------------------------------------------------------------------

NuIdentityReport nu_identity(const SpectralState& unit_state, double delta, int n,
                             const GalerkinSpace& space) {
    const SpectralState u = scaled(unit_state, std::sqrt((1.0 + delta) / inner(unit_state, unit_state)));
    ModelParams params;
    params.n = n;
    // -Au + F(u) evaluated as written, with no unit-norm assumption.
    const SpectralState rhs = projected_rhs(u, params, space);
    const Norms nm = norms(u, space.eigen);
    const double integral = power_integral(u, 2 * n, space.grid);

    NuIdentityReport report;
    report.delta = delta;
    report.nu = inner(u, u) - 1.0;
    report.dnu_dt = 2.0 * inner(rhs, u);
    report.predicted = 2.0 * (nm.h20 * nm.h20 + 2.0 * nm.h10 * nm.h10 + integral) * report.nu;
    report.relative_error = std::abs(report.dnu_dt - report.predicted) / std::abs(report.predicted);
    return report;
}

EnergyReport check_energy(const Trajectory& trajectory, double tolerance, double rate_from,
                          double min_relative_drop) {
    EnergyReport report;
    report.max_increase = -std::numeric_limits<double>::infinity();
    const auto& d = trajectory.diagnostics;
    for (std::size_t i = 1; i < d.size(); ++i) {
        report.max_increase = std::max(report.max_increase, d[i].psi - d[i - 1].psi);
        if (d[i - 1].time < rate_from) continue;
        if (std::abs(d[i].psi - d[i - 1].psi) < min_relative_drop * std::abs(d[i - 1].psi)) continue;
        const double dt = d[i].time - d[i - 1].time;
        const double slope = -(d[i].psi - d[i - 1].psi) / dt;
        const double mean_sq =
            0.5 * (d[i].dudt_l2 * d[i].dudt_l2 + d[i - 1].dudt_l2 * d[i - 1].dudt_l2);
        if (mean_sq <= 0.0) continue;
        report.max_rate_error = std::max(report.max_rate_error, std::abs(slope - mean_sq) / mean_sq);
        ++report.rate_pairs_checked;
    }
    if (d.size() < 2) report.max_increase = 0.0;
    report.non_increasing = report.max_increase <= tolerance;
    return report;
}

AprioriReport check_apriori(const Trajectory& trajectory, const EigenData& eigen) {
    AprioriReport report;
    const XtComponents xt = xt_components(trajectory, eigen);
    report.sup_v_sq = xt.sup_v_sq;
    report.sup_v = std::sqrt(xt.sup_v_sq);
    report.two_psi0 = 2.0 * trajectory.diagnostics.front().psi;
    report.squared_bound_holds = report.sup_v_sq <= report.two_psi0;
    report.unsquared_bound_holds = report.sup_v <= report.two_psi0;
    report.l2e_sq = xt.l2e_sq;
    std::vector<double> dudt_sq(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i)
        dudt_sq[i] = trajectory.diagnostics[i].dudt_l2 * trajectory.diagnostics[i].dudt_l2;
    report.dudt_sq_integral = trapezoid(trajectory.times, dudt_sq);
    return report;
}

double max_manifold_residual(const Trajectory& trajectory) {
    double m = 0.0;
    for (const auto& d : trajectory.diagnostics) m = std::max(m, d.manifold_residual);
    return m;
}

}  // namespace shgal
