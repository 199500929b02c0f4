#include "shgal/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "shgal/random.hpp"

namespace shgal {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"domain", {"dimension", "length_x", "length_y"}},
        {"model", {"n", "a", "mode"}},
        {"solver",
         {"level", "scheme", "dt", "t_end", "renormalize", "dealias_factor", "record_stride",
          "tol_manifold", "tol_energy", "blowup_v_norm", "reference_tolerance"}},
        {"initial_condition", {"type", "mode", "modes", "seed", "decay"}},
        {"output", {"directory", "formats", "snapshots", "snapshot_stride"}},
        {"converge", {"levels"}},
        {"probe", {"samples", "radius", "level", "epsilon", "delta", "seed"}},
    };
    return keys;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

double parse_real(const std::string& key, const std::string& raw) {
    std::string text = trim(raw);
    // "pi", "2pi", "2*pi", "0.5 * pi"
    double factor = 1.0;
    if (const auto pos = text.find("pi"); pos != std::string::npos && pos + 2 == text.size()) {
        std::string prefix = trim(text.substr(0, pos));
        if (!prefix.empty() && prefix.back() == '*') prefix = trim(prefix.substr(0, prefix.size() - 1));
        text = prefix.empty() ? "1" : prefix;
        factor = std::numbers::pi;
    }
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ConfigError(key, "expected a real number, got '" + raw + "'");
    return value * factor;
}

long long parse_integer(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ConfigError(key, "expected an integer, got '" + raw + "'");
    return value;
}

std::uint64_t parse_u64(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ConfigError(key, "expected an unsigned 64-bit integer, got '" + raw + "'");
    return value;
}

bool parse_bool(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(key, "expected a boolean, got '" + raw + "'");
}

ModeIndex parse_mode(const std::string& key, const std::string& raw, int dimension) {
    std::vector<std::string> parts = split(raw, ',');
    if (parts.size() == 1 && dimension == 2) parts = split(raw, ' ');
    if (static_cast<int>(parts.size()) != dimension)
        throw ConfigError(key, "mode '" + raw + "' needs " + std::to_string(dimension) +
                                   " component(s)");
    ModeIndex mode = dimension == 1 ? ModeIndex::of(1) : ModeIndex::of(1, 1);
    for (int i = 0; i < dimension; ++i) {
        const long long j = parse_integer(key, parts[i]);
        if (j < 1) throw ConfigError(key, "mode components must be >= 1");
        mode.j[i] = static_cast<int>(j);
    }
    return mode;
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    std::optional<std::string> get(const std::string& section, const std::string& key) const {
        const auto sec = tree_.get_child_optional(section);
        if (!sec) return std::nullopt;
        const auto value = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!value) return std::nullopt;
        return trim(*value);
    }

    std::string require(const std::string& section, const std::string& key) const {
        auto v = get(section, key);
        if (!v || v->empty()) throw ConfigError(section + "." + key, "required key is missing");
        return *v;
    }

private:
    const pt::ptree& tree_;
};

void reject_unknown(const pt::ptree& tree) {
    for (const auto& [section, body] : tree) {
        const auto it = schema().find(section);
        if (it == schema().end()) {
            if (body.empty() && !body.data().empty())
                throw ConfigError(section, "keys must live inside a [section]");
            throw ConfigError(section, "unknown section");
        }
        for (const auto& [key, value] : body)
            if (!it->second.contains(key))
                throw ConfigError(section + "." + key, "unknown key");
    }
}

void apply_override(pt::ptree& tree, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(assignment, "override must be key=value");
    const std::string path = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    const auto dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
        throw ConfigError(path, "override key must be section.key");
    const std::string section = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);
    if (!tree.get_child_optional(section)) tree.add_child(section, pt::ptree());
    tree.get_child(section).put(pt::ptree::path_type(key, '\0'), value);
}

template <class T>
void check(bool ok, const std::string& key, const T& message) {
    if (!ok) throw ConfigError(key, message);
}

ExperimentConfig from_tree(const pt::ptree& tree) {
    reject_unknown(tree);
    const Reader r(tree);
    ExperimentConfig c;

    // [domain]
    int dimension = 1;
    if (auto v = r.get("domain", "dimension")) dimension = static_cast<int>(parse_integer("domain.dimension", *v));
    check(dimension == 1 || dimension == 2, "domain.dimension", "must be 1 or 2");
    c.domain.dimension = dimension;
    c.domain.lengths = {std::numbers::pi, std::numbers::pi};
    if (auto v = r.get("domain", "length_x")) c.domain.lengths[0] = parse_real("domain.length_x", *v);
    if (auto v = r.get("domain", "length_y")) c.domain.lengths[1] = parse_real("domain.length_y", *v);
    check(c.domain.lengths[0] > 0.0, "domain.length_x", "must be > 0");
    check(c.domain.lengths[1] > 0.0, "domain.length_y", "must be > 0");

    // [model]
    c.model.n = static_cast<int>(parse_integer("model.n", r.require("model", "n")));
    check(c.model.n >= 1, "model.n", "must be >= 1");
    if (auto v = r.get("model", "a")) c.model.a = parse_real("model.a", *v);
    if (auto v = r.get("model", "mode")) {
        if (*v == "constrained") c.model.mode = Mode::constrained;
        else if (*v == "unconstrained") c.model.mode = Mode::unconstrained;
        else throw ConfigError("model.mode", "expected constrained|unconstrained, got '" + *v + "'");
    }

    // [solver]
    c.level = static_cast<int>(parse_integer("solver.level", r.require("solver", "level")));
    check(c.level >= 1, "solver.level", "must be >= 1");
    SolverConfig& s = c.solver;
    if (auto v = r.get("solver", "scheme")) {
        if (*v == "etd_rk2") s.scheme = Scheme::etd_rk2;
        else if (*v == "etd_rk4") s.scheme = Scheme::etd_rk4;
        else if (*v == "reference_rk_adaptive") s.scheme = Scheme::reference_rk_adaptive;
        else throw ConfigError("solver.scheme", "expected etd_rk2|etd_rk4|reference_rk_adaptive");
    }
    if (auto v = r.get("solver", "dt")) s.dt = parse_real("solver.dt", *v);
    if (auto v = r.get("solver", "t_end")) s.t_end = parse_real("solver.t_end", *v);
    if (auto v = r.get("solver", "renormalize")) {
        if (*v == "off") s.renormalize = Renormalize::off;
        else if (*v == "every_step") s.renormalize = Renormalize::every_step;
        else throw ConfigError("solver.renormalize", "expected off|every_step");
    }
    if (auto v = r.get("solver", "dealias_factor"))
        s.dealias_factor = static_cast<int>(parse_integer("solver.dealias_factor", *v));
    if (auto v = r.get("solver", "record_stride"))
        s.record_stride = static_cast<int>(parse_integer("solver.record_stride", *v));
    if (auto v = r.get("solver", "tol_manifold")) s.tol_manifold = parse_real("solver.tol_manifold", *v);
    if (auto v = r.get("solver", "tol_energy")) s.tol_energy = parse_real("solver.tol_energy", *v);
    if (auto v = r.get("solver", "blowup_v_norm")) s.blowup_v_norm = parse_real("solver.blowup_v_norm", *v);
    if (auto v = r.get("solver", "reference_tolerance"))
        s.reference_tolerance = parse_real("solver.reference_tolerance", *v);
    check(s.dt > 0.0, "solver.dt", "must be > 0");
    check(s.t_end > 0.0, "solver.t_end", "must be > 0");
    check(s.dt <= s.t_end, "solver.dt", "must not exceed solver.t_end");
    check(s.dealias_factor == 0 || s.dealias_factor >= 2 * c.model.n, "solver.dealias_factor",
          "must be >= 2n (or 0 for the default 2n)");
    check(s.record_stride >= 1, "solver.record_stride", "must be >= 1");
    check(s.tol_manifold > 0.0, "solver.tol_manifold", "must be > 0");
    check(s.tol_energy > 0.0, "solver.tol_energy", "must be > 0");
    check(s.blowup_v_norm > 0.0, "solver.blowup_v_norm", "must be > 0");
    check(s.reference_tolerance > 0.0, "solver.reference_tolerance", "must be > 0");
    if (s.dealias_factor == 0) s.dealias_factor = 2 * c.model.n;

    // [initial_condition]
    InitialCondition& ic = c.initial;
    const std::string type = r.require("initial_condition", "type");
    if (type == "single_mode") {
        ic.kind = InitialCondition::Kind::single_mode;
        ic.mode = parse_mode("initial_condition.mode", r.get("initial_condition", "mode").value_or(dimension == 1 ? "1" : "1,1"), dimension);
    } else if (type == "mode_mixture") {
        ic.kind = InitialCondition::Kind::mode_mixture;
        const std::string modes = r.require("initial_condition", "modes");
        for (const std::string& entry : split(modes, ';')) {
            const auto colon = entry.find(':');
            if (colon == std::string::npos)
                throw ConfigError("initial_condition.modes", "entries must be 'mode:weight', got '" + entry + "'");
            ic.mixture.emplace_back(parse_mode("initial_condition.modes", entry.substr(0, colon), dimension),
                                    parse_real("initial_condition.modes", entry.substr(colon + 1)));
        }
        check(!ic.mixture.empty(), "initial_condition.modes", "needs at least one entry");
    } else if (type == "random") {
        ic.kind = InitialCondition::Kind::random;
    } else if (type == "exponential") {
        ic.kind = InitialCondition::Kind::exponential;
    } else {
        throw ConfigError("initial_condition.type",
                          "expected single_mode|mode_mixture|random|exponential, got '" + type + "'");
    }
    if (auto v = r.get("initial_condition", "seed")) ic.seed = parse_u64("initial_condition.seed", *v);
    if (auto v = r.get("initial_condition", "decay")) ic.decay = parse_real("initial_condition.decay", *v);
    check(ic.decay > 0.0, "initial_condition.decay", "must be > 0");

    // [output]
    if (auto v = r.get("output", "directory")) c.output.directory = *v;
    if (auto v = r.get("output", "formats")) {
        c.output.csv = c.output.json = false;
        for (const std::string& f : split(*v, ',')) {
            if (f == "csv") c.output.csv = true;
            else if (f == "json") c.output.json = true;
            else throw ConfigError("output.formats", "unknown format '" + f + "'");
        }
    }
    if (auto v = r.get("output", "snapshots")) c.output.snapshots = parse_bool("output.snapshots", *v);
    if (auto v = r.get("output", "snapshot_stride"))
        c.output.snapshot_stride = static_cast<int>(parse_integer("output.snapshot_stride", *v));
    check(c.output.snapshot_stride >= 1, "output.snapshot_stride", "must be >= 1");

    // [converge]
    if (auto v = r.get("converge", "levels"))
        for (const std::string& item : split(*v, ','))
            c.levels.push_back(static_cast<int>(parse_integer("converge.levels", item)));

    // [probe]
    ProbeSpec& p = c.probe;
    if (auto v = r.get("probe", "samples")) p.samples = static_cast<int>(parse_integer("probe.samples", *v));
    if (auto v = r.get("probe", "radius")) p.radius = parse_real("probe.radius", *v);
    if (auto v = r.get("probe", "level")) p.level = static_cast<int>(parse_integer("probe.level", *v));
    if (auto v = r.get("probe", "epsilon")) p.epsilon = parse_real("probe.epsilon", *v);
    if (auto v = r.get("probe", "delta")) p.delta = parse_real("probe.delta", *v);
    if (auto v = r.get("probe", "seed")) p.seed = parse_u64("probe.seed", *v);
    check(p.samples >= 1, "probe.samples", "must be >= 1");
    check(p.radius > 0.0, "probe.radius", "must be > 0");
    check(p.level >= 1, "probe.level", "must be >= 1");
    check(p.epsilon >= 0.0, "probe.epsilon", "must be >= 0");
    check(p.delta != 0.0 && std::abs(p.delta) < 1.0, "probe.delta", "must be nonzero with |delta| < 1");
    return c;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::vector<std::string>& overrides) {
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
    }
    for (const std::string& o : overrides) apply_override(tree, o);
    return from_tree(tree);
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    return parse_config(in, overrides);
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["domain"] = {{"dimension", c.domain.dimension},
                   {"length_x", c.domain.lengths[0]},
                   {"length_y", c.domain.lengths[1]},
                   {"bc", "navier"}};
    j["model"] = {{"n", c.model.n},
                  {"a", c.model.a},
                  {"mode", c.model.mode == Mode::constrained ? "constrained" : "unconstrained"}};
    j["solver"] = {{"level", c.level},
                   {"scheme", to_string(c.solver.scheme)},
                   {"dt", c.solver.dt},
                   {"t_end", c.solver.t_end},
                   {"renormalize", to_string(c.solver.renormalize)},
                   {"dealias_factor", c.solver.effective_dealias_factor(c.model)},
                   {"record_stride", c.solver.record_stride},
                   {"tol_manifold", c.solver.tol_manifold},
                   {"tol_energy", c.solver.tol_energy},
                   {"blowup_v_norm", c.solver.blowup_v_norm},
                   {"reference_tolerance", c.solver.reference_tolerance}};
    ordered_json ic;
    switch (c.initial.kind) {
        case InitialCondition::Kind::single_mode:
            ic["type"] = "single_mode";
            ic["mode"] = std::vector<int>(c.initial.mode.j.begin(),
                                          c.initial.mode.j.begin() + c.initial.mode.dimension);
            break;
        case InitialCondition::Kind::mode_mixture: {
            ic["type"] = "mode_mixture";
            ordered_json modes = ordered_json::array();
            for (const auto& [mode, weight] : c.initial.mixture)
                modes.push_back({{"mode", std::vector<int>(mode.j.begin(), mode.j.begin() + mode.dimension)},
                                 {"weight", weight}});
            ic["modes"] = modes;
            break;
        }
        case InitialCondition::Kind::random: ic["type"] = "random"; break;
        case InitialCondition::Kind::exponential:
            ic["type"] = "exponential";
            ic["decay"] = c.initial.decay;
            break;
    }
    ic["seed"] = c.initial.seed;
    j["initial_condition"] = ic;
    j["output"] = {{"directory", c.output.directory},
                   {"csv", c.output.csv},
                   {"json", c.output.json},
                   {"snapshots", c.output.snapshots},
                   {"snapshot_stride", c.output.snapshot_stride}};
    j["converge"] = {{"levels", c.levels}};
    j["probe"] = {{"samples", c.probe.samples}, {"radius", c.probe.radius},
                  {"level", c.probe.level},     {"epsilon", c.probe.epsilon},
                  {"delta", c.probe.delta},     {"seed", c.probe.seed}};
    return j;
}

SpectralState build_initial_condition(const InitialCondition& ic, const EigenData& eigen) {
    const int dim = eigen.dimension;
    const int k = eigen.level;
    auto in_level = [&](const ModeIndex& m) {
        return m.j[0] <= k && (dim == 1 || m.j[1] <= k);
    };
    switch (ic.kind) {
        case InitialCondition::Kind::single_mode: {
            SpectralState s(dim, k);
            if (in_level(ic.mode)) s.at(ic.mode) = 1.0;
            return s;
        }
        case InitialCondition::Kind::mode_mixture: {
            SpectralState s(dim, k);
            for (const auto& [mode, weight] : ic.mixture)
                if (in_level(mode)) s.at(mode) += weight;
            return s;
        }
        case InitialCondition::Kind::random: {
            Rng rng(ic.seed);
            return random_initial_datum(eigen, rng);
        }
        case InitialCondition::Kind::exponential:
            return exponential_profile(dim, k, ic.decay);
    }
    return SpectralState(dim, k);
}

}  // namespace shgal
