// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "shgal/oracle.hpp"
#include "shgal/probes.hpp"
#include "shgal/random.hpp"

using namespace shgal;

namespace {

// tolerances
constexpr double kDriftOff = 1e-6;
constexpr double kDriftRenormalized = 1e-14;
constexpr double kOrderBand = 0.30;
constexpr double kRuntime1 = 10.0;
constexpr double kEnergySlack = 1e-8;
constexpr double kRateError = 0.01;
constexpr double kRateFrom = 1e-3;
constexpr double kEquilibrium = 1e-10;
constexpr double kOracle = 1e-10;
constexpr int kOracleSamples = 1000;
constexpr double kRuntime5 = 60.0;
constexpr double kConvergenceRatio = 0.5;
constexpr double kRuntime6 = 120.0;
constexpr double kStability = 0.20;
constexpr double kLipschitzChange = 0.25;
constexpr double kBracket = 1e-13;
constexpr double kNuIdentity = 1e-6;

constexpr std::uint64_t kSeed = 20240611;

const DomainSpec kLine = DomainSpec::interval(std::numbers::pi);

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

SpectralState random_datum(int level, std::uint64_t seed) {
    Rng rng(seed);
    return random_initial_datum(build_eigendata(kLine, level), rng);
}

SolverConfig base_config(double t_end, double dt, Renormalize renormalize) {
    SolverConfig c;
    c.t_end = t_end;
    c.dt = dt;
    c.renormalize = renormalize;
    return c;
}

ModelParams model(int n, double a = 0.0) {
    ModelParams p;
    p.n = n;
    p.a = a;
    return p;
}

// a-priori checks collected from every constrained run below
std::vector<std::string> apriori_failures;
int apriori_runs = 0;

void record_apriori(const Trajectory& traj, const EigenData& eigen, const char* label) {
    const AprioriReport r = check_apriori(traj, eigen);
    ++apriori_runs;
    if (!r.squared_bound_holds || !std::isfinite(r.l2e_sq))
        apriori_failures.push_back(fmt("%s: sup|u|_V^2=%.6g 2Psi0=%.6g intAu^2=%.6g", label,
                                       r.sup_v_sq, r.two_psi0, r.l2e_sq));
}

// shared by criteria 1 and 2
const GalerkinSpace& space16() {
    static const GalerkinSpace s(kLine, 16, 4);
    return s;
}

Outcome criterion1() {
    const auto start = std::chrono::steady_clock::now();
    const SpectralState u0 = random_datum(16, kSeed);
    const ModelParams p = model(2);
    const Trajectory off = integrate(u0, base_config(1.0, 1e-3, Renormalize::off), p, space16());
    const double t_run = seconds_since(start);
    const Trajectory half = integrate(u0, base_config(1.0, 5e-4, Renormalize::off), p, space16());
    const Trajectory renorm =
        integrate(u0, base_config(1.0, 1e-3, Renormalize::every_step), p, space16());
    record_apriori(off, space16().eigen, "c1 off");
    record_apriori(renorm, space16().eigen, "c1 every_step");

    const double r_off = max_manifold_residual(off);
    const double r_half = max_manifold_residual(half);
    const double r_renorm = max_manifold_residual(renorm);
    const double expected = std::pow(2.0, scheme_order(Scheme::etd_rk2));
    const double ratio = r_off / r_half;
    const bool ok = r_off <= kDriftOff && std::abs(ratio / expected - 1.0) <= kOrderBand &&
                    r_renorm <= kDriftRenormalized && t_run < kRuntime1;
    return {ok, fmt("drift(off)=%.3e drift(dt/2)=%.3e ratio=%.3f (expect %.0f) drift(every_step)=%.3e "
                    "run=%.2fs",
                    r_off, r_half, ratio, expected, r_renorm, t_run)};
}

Outcome criterion2() {
    const SpectralState u0 = random_datum(16, kSeed);
    const ModelParams p = model(2);
    double worst_increase = -1.0;
    for (Renormalize policy : {Renormalize::off, Renormalize::every_step}) {
        const Trajectory traj = integrate(u0, base_config(1.0, 1e-3, policy), p, space16());
        worst_increase = std::max(worst_increase, check_energy(traj, kEnergySlack, 0.0).max_increase);
    }
    const Trajectory fine = integrate(u0, base_config(1.0, 1e-4, Renormalize::off), p, space16());
    record_apriori(fine, space16().eigen, "c2 dt=1e-4");
    const EnergyReport rate = check_energy(fine, kEnergySlack, kRateFrom);
    const bool ok = worst_increase <= kEnergySlack && rate.non_increasing &&
                    rate.rate_pairs_checked > 0 && rate.max_rate_error <= kRateError;
    return {ok, fmt("max dPsi=%.3e; rate error=%.3e over %d pairs with t>=%.2g (dt=1e-4)",
                    std::max(worst_increase, rate.max_increase), rate.max_rate_error,
                    rate.rate_pairs_checked, kRateFrom)};
}

Outcome criterion3() {
    const GalerkinSpace space(kLine, 16, 4);
    const SpectralState u0 = random_datum(16, kSeed + 3);
    bool identical = true;
    for (Renormalize policy : {Renormalize::off, Renormalize::every_step}) {
        const SolverConfig c = base_config(1.0, 1e-3, policy);
        const Trajectory ref = integrate(u0, c, model(2, 0.0), space);
        record_apriori(ref, space.eigen, "c3");
        for (double a : {7.0, -3.0}) {
            const Trajectory other = integrate(u0, c, model(2, a), space);
            identical = identical && other.states == ref.states;
        }
    }
    return {identical, identical ? "a in {0,7,-3}: trajectories equal bit for bit"
                                 : "trajectories differ across a"};
}

Outcome criterion4() {
    double worst = 0.0, worst_oracle = 0.0;
    for (int n : {1, 2, 3}) {
        const GalerkinSpace space(kLine, 1, 2 * n);
        const SpectralState e1 = SpectralState::unit_mode(1, 1, ModeIndex::of(1));
        for (Renormalize policy : {Renormalize::off, Renormalize::every_step}) {
            const Trajectory traj = integrate(e1, base_config(1.0, 1e-3, policy), model(n), space);
            record_apriori(traj, space.eigen, "c4");
            worst = std::max(worst, norms(combine(1.0, traj.states.back(), -1.0, e1), space.eigen).v);
        }
        const SpectralState r = dense_rhs_oracle(e1, model(n), kLine, DenseOracle::default_points(1, n));
        worst_oracle = std::max(worst_oracle, l2_norm(r));
    }
    return {worst <= kEquilibrium && worst_oracle <= kEquilibrium,
            fmt("max |u(1)-u(0)|_V=%.3e, dense oracle |rhs(e1)|=%.3e", worst, worst_oracle)};
}

Outcome criterion5() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    Rng rng(kSeed + 5);
    for (int k : {1, 2, 4, 8}) {
        for (int n : {1, 2, 3}) {
            const GalerkinSpace space(kLine, k, 2 * n);
            const DenseOracle oracle(kLine, k, n, DenseOracle::default_points(k, n));
            const ModelParams p = model(n, 0.0);
            for (int s = 0; s < kOracleSamples; ++s) {
                const SpectralState u = random_unit_state(1, k, rng);
                const SpectralState fast = constrained_field(u, p, space);
                const SpectralState slow = oracle.rhs(u, p);
                double diff = 0.0, scale = 1.0;
                for (std::size_t j = 0; j < u.size(); ++j) {
                    diff = std::max(diff, std::abs(fast[j] - slow[j]));
                    scale = std::max(scale, std::abs(slow[j]));
                }
                worst = std::max(worst, diff / scale);
            }
        }
    }
    const double t = seconds_since(start);
    return {worst <= kOracle && t < kRuntime5,
            fmt("max |fast-dense|_inf/max(1,|dense|_inf)=%.3e over %d states x 12 (k,n); %.2fs",
                worst, kOracleSamples, t)};
}

ConvergenceReport convergence_levels() {
    SolverConfig c = base_config(0.5, 1e-3, Renormalize::every_step);
    return run_convergence_study(exponential_profile(1, 32, 1.0), {8, 16, 32}, kLine, c, model(2));
}

ConvergenceReport& convergence() {
    static ConvergenceReport report = convergence_levels();
    return report;
}

double runtime6 = 0.0;

Outcome criterion6() {
    const auto start = std::chrono::steady_clock::now();
    const ConvergenceReport& r = convergence();
    runtime6 = seconds_since(start);
    bool ok = r.pairwise_xt_gap.size() == 2;
    for (const LevelResult& l : r.per_level) ok = ok && l.ok;
    const double g1 = r.pairwise_xt_gap.at(0), g2 = r.pairwise_xt_gap.at(1);
    const double ratio = g2 / g1;
    ok = ok && g2 < g1 && ratio <= kConvergenceRatio && runtime6 < kRuntime6;
    return {ok, fmt("gap(8,16)=%.3e gap(16,32)=%.3e ratio=%.3e; %.2fs", g1, g2, ratio, runtime6)};
}

Outcome criterion7() {
    const GalerkinSpace space(kLine, 16, 4);
    const SpectralState u0 = random_datum(16, kSeed + 7);
    const SolverConfig c = base_config(0.5, 1e-3, Renormalize::every_step);
    const ModelParams p = model(2);
    const StabilityReport zero = run_uniqueness_probe(u0, 0.0, space, c, p, kSeed);
    const StabilityReport big = run_uniqueness_probe(u0, 1e-6, space, c, p, kSeed);
    const StabilityReport small = run_uniqueness_probe(u0, 1e-7, space, c, p, kSeed);

    bool bounded = true;
    for (const StabilityReport* s : {&big, &small})
        for (std::size_t i = 0; i < s->times.size(); ++i)
            bounded = bounded && s->gap_series[i] <= s->initial_gap *
                                                         std::exp(s->bound_constant * s->times[i]) *
                                                         (1.0 + 1e-12);
    const double change = std::abs(small.bound_constant - big.bound_constant) /
                          std::abs(big.bound_constant);
    const bool ok = zero.identical && zero.max_gap == 0.0 && bounded && change <= kStability;
    return {ok, fmt("eps=0 max_gap=%.1e identical=%d; C(1e-6)=%.6g C(1e-7)=%.6g change=%.3e; "
                    "least-squares rate %.6g / %.6g",
                    zero.max_gap, zero.identical ? 1 : 0, big.bound_constant, small.bound_constant,
                    change, big.fitted_rate, small.fitted_rate)};
}

Outcome criterion8() {
    const GalerkinSpace space(kLine, 8, 2);
    const LipschitzStatistics once = run_lipschitz_probe(10000, 2.0, 1, kSeed, space);
    const LipschitzStatistics twice = run_lipschitz_probe(20000, 2.0, 1, kSeed, space);
    const double change = std::abs(twice.max_ratio - once.max_ratio) / once.max_ratio;

    const SpectralState e1 = SpectralState::unit_mode(1, 8, ModeIndex::of(1));
    const double bracket = lipschitz_bracket(e1, SpectralState::zero(1, 8), 1, space.eigen);
    const double hand = 12.0 + std::cbrt(5.0);
    const bool ok = once.finite && twice.finite && change < kLipschitzChange &&
                    std::abs(bracket - hand) <= kBracket * hand;
    return {ok, fmt("max ratio %.6g (1e4) vs %.6g (2e4), change %.3e; bracket(e1,0)=%.15g vs %.15g",
                    once.max_ratio, twice.max_ratio, change, bracket, hand)};
}

Outcome criterion9() {
    double worst = 0.0;
    Rng rng(kSeed + 9);
    for (int n : {1, 2, 3}) {
        const GalerkinSpace space(kLine, 16, 2 * n);
        for (int s = 0; s < 20; ++s) {
            const SpectralState u = random_unit_state(1, 16, rng);
            for (double delta : {1e-3, -1e-3})
                worst = std::max(worst, nu_identity(u, delta, n, space).relative_error);
        }
    }
    return {worst <= kNuIdentity, fmt("max relative error %.3e at delta=+-1e-3", worst)};
}

Outcome criterion10() {
    SolverConfig c = base_config(0.5, 1e-3, Renormalize::every_step);
    const ConvergenceReport r =
        run_convergence_study(exponential_profile(1, 64, 1.0), {8, 16, 32, 64}, kLine, c, model(2));
    std::vector<double> l2e;
    for (const LevelResult& l : r.per_level) l2e.push_back(l.l2e * l.l2e);
    bool finite = true;
    for (double x : l2e) finite = finite && std::isfinite(x);
    for (const LevelResult& l : r.per_level) {
        ++apriori_runs;
        if (!(l.sup_v * l.sup_v <= 2.0 * l.psi0))
            apriori_failures.push_back(fmt("c6 k=%d: sup|u|_V^2=%.6g 2Psi0=%.6g", l.level,
                                           l.sup_v * l.sup_v, 2.0 * l.psi0));
    }
    bool saturating = true;
    for (std::size_t i = 2; i < l2e.size(); ++i) {
        const double prev = l2e[i - 1] - l2e[i - 2], next = l2e[i] - l2e[i - 1];
        const double floor = 1e-12 * l2e[i];
        saturating = saturating && prev >= -floor && next >= -floor && next <= prev + floor;
    }
    const bool ok = apriori_failures.empty() && finite && saturating;
    std::string detail = fmt("sup|u|_V^2 <= 2Psi(u0) in %d runs; intAu^2 k=8,16,32,64: %.12g %.12g "
                             "%.12g %.12g",
                             apriori_runs, l2e.at(0), l2e.at(1), l2e.at(2), l2e.at(3));
    for (const std::string& f : apriori_failures) detail += "; violated " + f;
    return {ok, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"manifold invariance", criterion1},
        {"energy dissipation", criterion2},
        {"a-cancellation", criterion3},
        {"equilibrium reproduction", criterion4},
        {"oracle equivalence", criterion5},
        {"Galerkin convergence", criterion6},
        {"uniqueness/stability", criterion7},
        {"Lipschitz property", criterion8},
        {"nu identity", criterion9},
        {"a-priori bounds", criterion10},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("[%s] criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
