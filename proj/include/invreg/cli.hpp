#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "errors.hpp"
#include "filter_checks.hpp"
#include "montecarlo.hpp"
#include "rate_inference.hpp"
#include "risk.hpp"
#include "table_io.hpp"

namespace invreg {

inline constexpr const char* kVersion = "0.1.0";

/// Exit statuses of run_config.
enum ExitStatus : int {
    kExitOk = 0,
    kExitViolations = 1,  // filters-check found counterexamples
    kExitConfig = 2,
    kExitFailure = 3
};

struct RunManifest {
    Command command = Command::SimulateRates;
    std::filesystem::path config_path;
    std::filesystem::path output_dir;
    std::optional<std::uint64_t> master_seed_override;
    unsigned workers = 1;
};

/// One r_hat curve per noise level, each from the draw replicate_seed(master, row, replication).
inline ScoreCurve compute_score_curve(const RunConfig& cfg) {
    ScoreCurve curve;
    for (std::size_t row = 0; row < cfg.sigmas.size(); ++row) {
        const double sigma = cfg.sigmas[row];
        const SpectralProblem problem =
            detail::build_problem(cfg.score_curve.problem, sigma, mix_seed(cfg.master_seed, kTruthStream));
        const ParameterGrid grid = build_grid(sigma, problem.lambda_max(), cfg.grid_ratio);
        const Observations obs =
            sample_observations(problem, replicate_seed(cfg.master_seed, row, cfg.score_curve.replication));
        for (double alpha : grid.values)
            curve.points.push_back(
                {sigma, alpha, empirical_prediction_risk(problem.eigenvalues(), sigma, cfg.filter, alpha, obs)});
    }
    return curve;
}

namespace detail {

struct CommandOutcome {
    std::vector<std::string> files;
    int status = kExitOk;
    nlohmann::json extra = nlohmann::json::object();
};

inline void emit(const std::filesystem::path& dir, const std::string& name, std::string_view content,
                 CommandOutcome& outcome) {
    write_file(dir / name, content);
    outcome.files.push_back(name);
}

inline CommandOutcome execute(const RunConfig& cfg, const std::filesystem::path& out, unsigned workers) {
    CommandOutcome outcome;
    switch (cfg.command) {
        case Command::SimulateRates: {
            const RiskTable table = run_rate_experiment(cfg.experiment(), workers);
            emit(out, "risk_table.csv", to_csv(table), outcome);
            if (cfg.retain_errors) emit(out, "per_rep_errors.csv", per_rep_errors_csv(table), outcome);
            break;
        }
        case Command::SimulateEfficiency: {
            const EfficiencyTable table = run_efficiency_experiment(cfg.experiment(), workers);
            emit(out, "efficiency_table.csv", to_csv(table), outcome);
            emit(out, "risk_table.csv", to_csv(table.risks), outcome);
            if (cfg.retain_errors) emit(out, "per_rep_errors.csv", per_rep_errors_csv(table.risks), outcome);
            if (cfg.default_sigma_ladder)
                outcome.extra["sigma_ladder"] = "default geometric ladder 1e-1 ... 1e-6; the config gave no sigmas";
            break;
        }
        case Command::RateTest: {
            const RiskTable table = parse_per_rep_errors(read_file(cfg.rate_test.errors));
            const auto samples = rate_samples(table, cfg.rate_test.rule);
            const RateTestResult r = rate_test(samples, cfg.rate_test.theta_target, cfg.rate_test.levels);
            std::string csv = "rule,theta_target,theta_hat,rho_hat,statistic,p_value\n";
            csv += std::string(to_string(cfg.rate_test.rule)) + ',' + format_double(r.theta_target) + ',' +
                   format_double(r.theta_hat) + ',' + format_double(r.rho_hat) + ',' + format_double(r.statistic) +
                   ',' + format_double(r.p_value) + '\n';
            emit(out, "rate_test.csv", csv, outcome);
            nlohmann::json j;
            j["rule"] = to_string(cfg.rate_test.rule);
            j["theta_target"] = r.theta_target;
            j["theta_hat"] = r.theta_hat;
            j["rho_hat"] = r.rho_hat;
            j["statistic"] = r.statistic;
            j["p_value"] = r.p_value;
            j["noise_levels"] = samples.size();
            for (const auto& [level, rejected] : r.reject_at) j["reject_at"][format_double(level)] = rejected;
            emit(out, "rate_test.json", j.dump(2) + "\n", outcome);
            break;
        }
        case Command::ScoreCurve:
            emit(out, "score_curve.csv", to_csv(compute_score_curve(cfg)), outcome);
            break;
        case Command::FiltersCheck: {
            std::string csv = "family,check,trials,violations\n";
            std::size_t violations = 0;
            for (const auto& spec : all_filter_families()) {
                for (const auto& r : check_filter_invariants(spec, cfg.filters_check.samples, cfg.master_seed)) {
                    csv += r.family + ',' + r.check + ',' + std::to_string(r.trials) + ',' +
                           std::to_string(r.violations) + '\n';
                    violations += r.violations;
                }
            }
            emit(out, "filters_check.csv", csv, outcome);
            outcome.extra["violations"] = violations;
            if (violations > 0) outcome.status = kExitViolations;
            break;
        }
    }
    return outcome;
}

}  // namespace detail

/**
 * Runs one command end to end: reads and validates the config, executes it,
 * writes its tables and a metadata.json sidecar into the output directory.
 * Diagnostics go to `err`. Returns an ExitStatus value.
 */
inline int run_config(const RunManifest& manifest, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    RunConfig cfg;
    try {
        const std::string text = read_file(manifest.config_path);
        cfg = parse_run_config(text, manifest.command, manifest.config_path.parent_path());
        if (manifest.master_seed_override) cfg.master_seed = *manifest.master_seed_override;
    } catch (const config_error& e) {
        err << "invreg: " << manifest.config_path.string() << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const io_error& e) {
        err << "invreg: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        std::filesystem::create_directories(manifest.output_dir);
        auto outcome = detail::execute(cfg, manifest.output_dir, manifest.workers);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;

        nlohmann::json meta;
        meta["command"] = to_string(cfg.command);
        meta["version"] = kVersion;
        meta["config_path"] = manifest.config_path.string();
        meta["config"] = cfg.echo;
        meta["master_seed"] = cfg.master_seed;
        meta["seed_overridden"] = manifest.master_seed_override.has_value();
        meta["workers"] = manifest.workers;
        meta["wall_time_seconds"] = elapsed.count();
        meta["files"] = outcome.files;
        for (const auto& item : outcome.extra.items()) meta[item.key()] = item.value();
        write_file(manifest.output_dir / "metadata.json", meta.dump(2) + "\n");
        if (outcome.status == kExitViolations) err << "invreg: filter invariant violations found\n";
        return outcome.status;
    } catch (const std::invalid_argument& e) {
        // Raised when config values are individually valid but jointly unusable,
        // e.g. a noise level whose variance exceeds the top eigenvalue.
        err << "invreg: invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "invreg: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace invreg
