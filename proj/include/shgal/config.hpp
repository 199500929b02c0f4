#pragma once

// Experiment configuration: an INI file with sections [domain], [model],
// [solver], [initial_condition], [output], [converge] and [probe].
// Unknown sections or keys are rejected; every error names the dotted key.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "shgal/integrator.hpp"

namespace shgal {

struct InitialCondition {
    enum class Kind { single_mode, mode_mixture, random, exponential };
    Kind kind = Kind::single_mode;
    ModeIndex mode = ModeIndex::of(1);
    std::vector<std::pair<ModeIndex, double>> mixture;
    std::uint64_t seed = 1;
    double decay = 1.0;
};

struct OutputSpec {
    std::string directory = "out";
    bool csv = true;
    bool json = true;
    bool snapshots = false;
    int snapshot_stride = 1;
};

struct ProbeSpec {
    int samples = 10000;
    double radius = 2.0;
    int level = 8;
    double epsilon = 1e-6;
    double delta = 1e-3;
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    DomainSpec domain = DomainSpec::interval(3.141592653589793);
    int level = 16;
    ModelParams model;
    SolverConfig solver;
    InitialCondition initial;
    OutputSpec output;
    std::vector<int> levels;
    ProbeSpec probe;
};

// overrides are "section.key=value" strings applied before validation.
ExperimentConfig parse_config(std::istream& in, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

// Fully resolved configuration, including defaults.
nlohmann::ordered_json to_json(const ExperimentConfig& config);

// Initial datum at the given level (before init_galerkin normalization).
SpectralState build_initial_condition(const InitialCondition& ic, const EigenData& eigen);

}  // namespace shgal
