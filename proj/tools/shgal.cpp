// shgal: simulate / converge / probe driver.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shgal/config.hpp"
#include "shgal/output.hpp"
#include "shgal/probes.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace shgal;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitDivergence = 2;

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "INI experiment file")->required();
    cmd->add_option("--set", o.sets, "override section.key=value (repeatable)");
    cmd->add_option("--out", o.out, "output directory (default: output.directory)");
    cmd->add_option("--seed", o.seed, "seed for random initial data and probes");
}

ExperimentConfig load(const CommonOptions& o) {
    ExperimentConfig c = load_config(o.config_path, o.sets);
    if (o.seed) {
        c.initial.seed = *o.seed;
        c.probe.seed = *o.seed;
    }
    if (!o.out.empty()) c.output.directory = o.out;
    return c;
}

// JSON has no NaN/inf; those become null.
ordered_json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

ordered_json metadata(const ExperimentConfig& c, const std::string& command) {
    ordered_json m;
    m["schema_version"] = kSchemaVersion;
    m["version"] = kVersion;
    m["command"] = command;
    m["seed"] = c.initial.seed;
    m["config"] = to_json(c);
    return m;
}

SpectralState initial_state(const ExperimentConfig& c, const GalerkinSpace& space) {
    return init_galerkin(build_initial_condition(c.initial, space.eigen), space.level);
}

void write_run(const fs::path& dir, const ExperimentConfig& c, const GalerkinSpace& space,
               const Trajectory& traj, ordered_json meta) {
    if (c.output.csv) write_file_atomic(dir / "diagnostics.csv", diagnostics_csv(traj.diagnostics));
    if (c.output.snapshots)
        write_file_atomic(dir / "snapshots.csv",
                          snapshots_csv(traj, space.grid, c.output.snapshot_stride));
    meta["steps_taken"] = traj.steps_taken;
    meta["records"] = traj.size();
    meta["generic_projection_evaluations"] = traj.generic_projection_evaluations;
    if (c.output.json) {
        ordered_json rows = ordered_json::array();
        for (const Diagnostics& d : traj.diagnostics)
            rows.push_back({d.time, d.l2, d.h10, d.h20, d.v, d.l2n, d.psi, d.manifold_residual,
                            d.dudt_l2});
        write_json_atomic(dir / "diagnostics.json",
                          {{"schema_version", kSchemaVersion},
                           {"columns", {"time", "l2", "h10", "h20", "v", "l2n", "psi",
                                        "manifold_residual", "dudt_l2"}},
                           {"rows", rows}});
    }
    write_json_atomic(dir / "metadata.json", meta);
}

int cmd_simulate(const CommonOptions& o) {
    const ExperimentConfig c = load(o);
    const GalerkinSpace space(c.domain, c.level, c.solver.effective_dealias_factor(c.model));
    const SpectralState u0 = initial_state(c, space);
    const fs::path dir = c.output.directory;
    ordered_json meta = metadata(c, "simulate");
    try {
        const Trajectory traj = integrate(u0, c.solver, c.model, space);
        meta["status"] = "ok";
        meta["failure_time"] = nullptr;
        write_run(dir, c, space, traj, meta);
    } catch (const DivergenceError& e) {
        meta["status"] = "diverged";
        meta["failure_time"] = e.last_good_time();
        meta["message"] = e.what();
        write_run(dir, c, space, e.partial(), meta);
        std::cerr << "solver diverged after t = " << format_double(e.last_good_time()) << ": "
                  << e.what() << "\n";
        return kExitDivergence;
    }
    return 0;
}

int cmd_converge(const CommonOptions& o, const std::vector<int>& cli_levels) {
    ExperimentConfig c = load(o);
    if (!cli_levels.empty()) c.levels = cli_levels;
    if (c.levels.size() < 2)
        throw ConfigError("converge.levels", "a convergence study needs at least two levels");
    const int finest = c.levels.back();
    const EigenData eigen = build_eigendata(c.domain, finest);
    const SpectralState u0 = build_initial_condition(c.initial, eigen);
    ConvergenceReport report;
    try {
        report = run_convergence_study(u0, c.levels, c.domain, c.solver, c.model);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("converge.levels", e.what());
    }

    ordered_json levels = ordered_json::array();
    bool any_failed = false;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < report.per_level.size(); ++i) {
        const LevelResult& r = report.per_level[i];
        const double gap = i < report.pairwise_xt_gap.size()
                               ? report.pairwise_xt_gap[i]
                               : std::numeric_limits<double>::quiet_NaN();
        ordered_json entry = {{"k", r.level},
                              {"ok", r.ok},
                              {"xt_gap_to_next", num(gap)},
                              {"sup_v", num(r.sup_v)},
                              {"l2e", num(r.l2e)},
                              {"dudt_l2_integral", num(r.dudt_l2_integral)},
                              {"psi0", num(r.psi0)}};
        if (!r.ok) {
            entry["error"] = r.error;
            any_failed = true;
        }
        levels.push_back(entry);
        rows.push_back({static_cast<double>(r.level), gap, r.ok ? r.sup_v : std::nan(""),
                        r.ok ? r.l2e : std::nan("")});
    }
    ordered_json gaps = ordered_json::array();
    for (double g : report.pairwise_xt_gap) gaps.push_back(num(g));

    ordered_json doc = metadata(c, "converge");
    doc["status"] = any_failed ? "level_failed" : "ok";
    doc["levels"] = levels;
    doc["pairwise_xt_gap"] = gaps;
    doc["fitted_rate"] = num(report.fitted_rate);
    const fs::path dir = c.output.directory;
    write_file_atomic(dir / "converge.csv", table_csv("k,xt_gap,sup_v,l2E", rows));
    write_json_atomic(dir / "converge.json", doc);
    return any_failed ? kExitDivergence : 0;
}

int cmd_probe(const CommonOptions& o, const std::string& which) {
    const ExperimentConfig c = load(o);
    const GalerkinSpace space(c.domain, c.probe.level, c.solver.effective_dealias_factor(c.model));
    ordered_json doc = metadata(c, "probe");
    doc["probe"] = which;
    doc["seed"] = c.probe.seed;
    ordered_json report;
    if (which == "lipschitz") {
        const LipschitzStatistics s =
            run_lipschitz_probe(c.probe.samples, c.probe.radius, c.model.n, c.probe.seed, space);
        report = {{"requested", s.requested}, {"evaluated", s.evaluated},
                  {"skipped", s.skipped},     {"radius", c.probe.radius},
                  {"finite", s.finite},       {"max_ratio", num(s.max_ratio)},
                  {"mean_ratio", num(s.mean_ratio)}, {"q50", num(s.q50)},
                  {"q90", num(s.q90)},        {"q99", num(s.q99)}};
    } else if (which == "uniqueness") {
        const SpectralState u0 = initial_state(c, space);
        StabilityReport s;
        try {
            s = run_uniqueness_probe(u0, c.probe.epsilon, space, c.solver, c.model, c.probe.seed);
        } catch (const DivergenceError& e) {
            doc["status"] = "diverged";
            doc["failure_time"] = e.last_good_time();
            write_json_atomic(fs::path(c.output.directory) / "probe_uniqueness.json", doc);
            std::cerr << "solver diverged: " << e.what() << "\n";
            return kExitDivergence;
        }
        ordered_json series = ordered_json::array();
        for (std::size_t i = 0; i < s.times.size(); ++i) series.push_back({s.times[i], s.gap_series[i]});
        report = {{"epsilon", s.epsilon},
                  {"initial_gap", s.initial_gap},
                  {"max_gap", s.max_gap},
                  {"identical", s.identical},
                  {"bound_constant", num(s.bound_constant)},
                  {"fitted_rate", num(s.fitted_rate)},
                  {"fitted_intercept", num(s.fitted_intercept)},
                  {"fit_relative_residual", num(s.fit_relative_residual)},
                  {"fit_log_residual", num(s.fit_log_residual)},
                  {"gap_series", series}};
    } else {
        SpectralState unit = initial_state(c, space);
        ordered_json entries = ordered_json::array();
        double worst = 0.0;
        for (double delta : {c.probe.delta, -c.probe.delta}) {
            const NuIdentityReport r = nu_identity(unit, delta, c.model.n, space);
            worst = std::max(worst, r.relative_error);
            entries.push_back({{"delta", r.delta},
                               {"nu", r.nu},
                               {"dnu_dt", r.dnu_dt},
                               {"predicted", r.predicted},
                               {"relative_error", r.relative_error}});
        }
        report = {{"evaluations", entries}, {"max_relative_error", worst}};
    }
    doc["status"] = "ok";
    doc["report"] = report;
    write_json_atomic(fs::path(c.output.directory) / ("probe_" + which + ".json"), doc);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galerkin solver for the constrained Swift-Hohenberg flow"};
    app.require_subcommand(1);
    CommonOptions common;

    auto* simulate = app.add_subcommand("simulate", "integrate one trajectory");
    add_common(simulate, common);

    auto* converge = app.add_subcommand("converge", "Cauchy convergence across levels");
    add_common(converge, common);
    std::vector<int> levels;
    converge->add_option("--levels", levels, "comma-separated levels (overrides converge.levels)")
        ->delimiter(',');

    auto* probe = app.add_subcommand("probe", "lipschitz | uniqueness | nu_identity");
    add_common(probe, common);
    std::string which;
    probe->add_option("which", which)
        ->required()
        ->check(CLI::IsMember({"lipschitz", "uniqueness", "nu_identity"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(common);
        if (converge->parsed()) return cmd_converge(common, levels);
        return cmd_probe(common, which);
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
