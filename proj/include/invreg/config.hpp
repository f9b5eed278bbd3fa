#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "filters.hpp"
#include "montecarlo.hpp"
#include "param_select.hpp"

namespace invreg {

/// Malformed or inconsistent configuration; the message names the offending field.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { SimulateRates, SimulateEfficiency, RateTest, ScoreCurve, FiltersCheck };

inline Command parse_command(const std::string& name) {
    if (name == "simulate-rates") return Command::SimulateRates;
    if (name == "simulate-efficiency") return Command::SimulateEfficiency;
    if (name == "rate-test") return Command::RateTest;
    if (name == "score-curve") return Command::ScoreCurve;
    if (name == "filters-check") return Command::FiltersCheck;
    throw config_error("unknown command '" + name + "'");
}

inline const char* to_string(Command c) {
    switch (c) {
        case Command::SimulateRates: return "simulate-rates";
        case Command::SimulateEfficiency: return "simulate-efficiency";
        case Command::RateTest: return "rate-test";
        case Command::ScoreCurve: return "score-curve";
        case Command::FiltersCheck: return "filters-check";
    }
    return "unknown";
}

/// Config block name of each command.
inline const char* block_name(Command c) {
    switch (c) {
        case Command::SimulateRates: return "rates";
        case Command::SimulateEfficiency: return "efficiency";
        case Command::RateTest: return "rate_test";
        case Command::ScoreCurve: return "score_curve";
        case Command::FiltersCheck: return "filters_check";
    }
    return "";
}

/// Noise ladder of the efficiency study when the config gives none.
inline const std::vector<double> kDefaultEfficiencySigmas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

struct RateTestSettings {
    std::filesystem::path errors;  // per-replication error CSV
    SelectionRule rule = SelectionRule::Pred;
    double theta_target = 0.75;
    std::vector<double> levels{0.01, 0.05, 0.10};
};

struct ScoreCurveSettings {
    ProblemDescriptor problem;
    std::size_t replication = 0;
};

struct FiltersCheckSettings {
    std::size_t samples = 1000;
};

/**
 * Parsed run configuration.
 *
 * Shared keys: "filter", "grid_ratio", "sigmas", "replications",
 * "master_seed", "modes". Exactly one command block may appear, and it must
 * belong to the command being run. Unknown keys anywhere are rejected.
 */
struct RunConfig {
    Command command = Command::SimulateRates;
    FilterSpec filter = FilterSpec::tikhonov();
    double grid_ratio = kDefaultGridRatio;
    std::vector<double> sigmas;
    std::size_t replications = 200;
    std::uint64_t master_seed = 0;
    long modes = 1024;

    ProblemDescriptor problem;  // simulate-rates / simulate-efficiency
    bool retain_errors = true;
    RateTestSettings rate_test;
    ScoreCurveSettings score_curve;
    FiltersCheckSettings filters_check;

    bool default_sigma_ladder = false;  // sigmas filled from kDefaultEfficiencySigmas
    nlohmann::json echo;                // the config as read

    ExperimentConfig experiment() const {
        ExperimentConfig e;
        e.problem = problem;
        e.filter = filter;
        e.sigmas = sigmas;
        e.replications = replications;
        e.grid_ratio = grid_ratio;
        e.master_seed = master_seed;
        e.retain_errors = retain_errors;
        return e;
    }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& object, const std::string& where, std::initializer_list<const char*> allowed) {
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& item : object.items())
        if (!known.contains(item.key())) throw config_error("unknown key '" + where + item.key() + "'");
}

template <class T>
T field(const json& object, const std::string& where, const char* key, T fallback) {
    if (!object.contains(key)) return fallback;
    try {
        return object.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error("field '" + where + key + "' has the wrong type");
    }
}

inline json required_object(const json& object, const std::string& where) {
    if (!object.is_object()) throw config_error("'" + where + "' must be an object");
    return object;
}

inline FilterSpec parse_filter_field(const json& value) {
    try {
        if (value.is_string()) return parse_filter(value.get<std::string>());
        required_object(value, "filter");
        reject_unknown_keys(value, "filter.", {"family", "m"});
        if (!value.contains("family")) throw config_error("field 'filter.family' is required");
        return parse_filter(value.at("family").get<std::string>(), field<int>(value, "filter.", "m", 2));
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("field 'filter': ") + e.what());
    } catch (const json::exception&) {
        throw config_error("field 'filter' has the wrong type");
    }
}

inline TestFunction parse_truth(const std::string& name, const std::string& where) {
    if (name == "hat") return TestFunction::HatFunction;
    if (name == "indicator") return TestFunction::Indicator;
    throw config_error("field '" + where + "truth' must be \"hat\" or \"indicator\"");
}

inline ProblemDescriptor parse_problem(const json& block, const std::string& where, long modes) {
    const auto kind = field<std::string>(block, where, "problem", "green");
    if (kind == "green") {
        return ProblemDescriptor::green(modes, parse_truth(field<std::string>(block, where, "truth", "hat"), where));
    }
    if (kind == "diagonal") {
        return ProblemDescriptor::diagonal(modes, field<double>(block, where, "a", 4.0), field<double>(block, where, "nu", 4.0));
    }
    throw config_error("field '" + where + "problem' must be \"green\" or \"diagonal\"");
}

inline SelectionRule parse_rule(const std::string& name) {
    if (name == "oracle") return SelectionRule::Oracle;
    if (name == "pred") return SelectionRule::Pred;
    if (name == "lepskii") return SelectionRule::Lepskii;
    throw config_error("field 'rate_test.rule' must be \"oracle\", \"pred\" or \"lepskii\"");
}

}  // namespace detail

/// Parses config text for `command`. Relative paths inside the config are
/// resolved against `base_dir`.
inline RunConfig parse_run_config(const std::string& text, Command command,
                                  const std::filesystem::path& base_dir = {}) {
    using detail::field;
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    detail::required_object(root, "<root>");
    detail::reject_unknown_keys(root, "", {"filter", "grid_ratio", "sigmas", "replications", "master_seed", "modes",
                                           "rates", "efficiency", "rate_test", "score_curve", "filters_check"});
    for (Command other : {Command::SimulateRates, Command::SimulateEfficiency, Command::RateTest, Command::ScoreCurve,
                          Command::FiltersCheck}) {
        if (other != command && root.contains(block_name(other)))
            throw config_error(std::string("block '") + block_name(other) + "' does not belong to command " +
                               to_string(command));
    }

    RunConfig cfg;
    cfg.command = command;
    cfg.echo = root;
    if (root.contains("filter")) cfg.filter = detail::parse_filter_field(root.at("filter"));
    cfg.grid_ratio = field<double>(root, "", "grid_ratio", kDefaultGridRatio);
    if (!(cfg.grid_ratio > 1.0)) throw config_error("field 'grid_ratio' must exceed 1");
    cfg.sigmas = field<std::vector<double>>(root, "", "sigmas", {});
    for (double s : cfg.sigmas)
        if (!(s > 0.0)) throw config_error("field 'sigmas' must hold positive numbers");
    const auto reps = field<long long>(root, "", "replications", 200);
    if (reps < 2) throw config_error("field 'replications' must be at least 2");
    cfg.replications = static_cast<std::size_t>(reps);
    cfg.master_seed = field<std::uint64_t>(root, "", "master_seed", 0);
    cfg.modes = field<long>(root, "", "modes", 1024);
    if (cfg.modes < 1) throw config_error("field 'modes' must be at least 1");

    const std::string where = std::string(block_name(command)) + ".";
    const nlohmann::json block = root.contains(block_name(command))
                                     ? detail::required_object(root.at(block_name(command)), block_name(command))
                                     : nlohmann::json::object();
    const bool needs_sigmas = command == Command::SimulateRates || command == Command::ScoreCurve;
    if (needs_sigmas && cfg.sigmas.empty()) throw config_error("field 'sigmas' is required for " + std::string(to_string(command)));
    if (command == Command::SimulateEfficiency && cfg.sigmas.empty()) {
        cfg.sigmas = kDefaultEfficiencySigmas;
        cfg.default_sigma_ladder = true;
    }

    switch (command) {
        case Command::SimulateRates:
            detail::reject_unknown_keys(block, where, {"problem", "truth", "a", "nu", "retain_errors"});
            cfg.problem = detail::parse_problem(block, where, cfg.modes);
            cfg.retain_errors = field<bool>(block, where, "retain_errors", true);
            break;
        case Command::SimulateEfficiency:
            detail::reject_unknown_keys(block, where, {"a", "nu", "retain_errors"});
            cfg.problem = ProblemDescriptor::diagonal(cfg.modes, field<double>(block, where, "a", 4.0),
                                                      field<double>(block, where, "nu", 4.0));
            cfg.retain_errors = field<bool>(block, where, "retain_errors", false);
            break;
        case Command::RateTest: {
            detail::reject_unknown_keys(block, where, {"errors", "rule", "theta_target", "levels"});
            if (!block.contains("errors")) throw config_error("field 'rate_test.errors' is required");
            std::filesystem::path errors = field<std::string>(block, where, "errors", "");
            cfg.rate_test.errors = errors.is_relative() ? base_dir / errors : errors;
            cfg.rate_test.rule = detail::parse_rule(field<std::string>(block, where, "rule", "pred"));
            if (!block.contains("theta_target")) throw config_error("field 'rate_test.theta_target' is required");
            cfg.rate_test.theta_target = field<double>(block, where, "theta_target", 0.0);
            cfg.rate_test.levels = field<std::vector<double>>(block, where, "levels", cfg.rate_test.levels);
            for (double l : cfg.rate_test.levels)
                if (!(l > 0.0 && l < 1.0)) throw config_error("field 'rate_test.levels' must lie in (0, 1)");
            break;
        }
        case Command::ScoreCurve:
            detail::reject_unknown_keys(block, where, {"problem", "truth", "a", "nu", "replication"});
            cfg.score_curve.problem = detail::parse_problem(block, where, cfg.modes);
            cfg.score_curve.replication = field<std::size_t>(block, where, "replication", 0);
            break;
        case Command::FiltersCheck: {
            detail::reject_unknown_keys(block, where, {"samples"});
            const auto samples = field<long long>(block, where, "samples", 1000);
            if (samples < 1) throw config_error("field 'filters_check.samples' must be positive");
            cfg.filters_check.samples = static_cast<std::size_t>(samples);
            break;
        }
    }
    return cfg;
}

}  // namespace invreg
