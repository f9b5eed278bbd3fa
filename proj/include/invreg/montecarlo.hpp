#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "filters.hpp"
#include "param_select.hpp"
#include "problems.hpp"
#include "random.hpp"
#include "risk.hpp"
#include "sequence_model.hpp"

namespace invreg {

enum class ProblemKind { Green, Diagonal };

/// Which generator an experiment draws its problems from.
struct ProblemDescriptor {
    ProblemKind kind = ProblemKind::Green;
    long modes = 1024;
    TestFunction truth = TestFunction::HatFunction;  // Green only
    double a = 4.0;                                  // Diagonal only: singular values k^-a
    double nu = 4.0;                                 // Diagonal only: truth decay k^-nu

    static ProblemDescriptor green(long modes, TestFunction truth) {
        return {ProblemKind::Green, modes, truth, 0.0, 0.0};
    }
    static ProblemDescriptor diagonal(long modes, double a, double nu) {
        return {ProblemKind::Diagonal, modes, TestFunction::HatFunction, a, nu};
    }
};

struct ExperimentConfig {
    ProblemDescriptor problem;
    FilterSpec filter = FilterSpec::tikhonov();
    std::vector<double> sigmas;
    std::size_t replications = 200;
    double grid_ratio = kDefaultGridRatio;
    std::uint64_t master_seed = 0;
    bool retain_errors = true;
};

/// Squared reconstruction errors of one replication under the three rules.
struct ReplicationErrors {
    double err_or = 0.0;
    double err_pred = 0.0;
    double err_lep = 0.0;

    friend bool operator==(const ReplicationErrors&, const ReplicationErrors&) = default;
};

struct RiskRow {
    double sigma = 0.0;
    double r_or = 0.0, se_or = 0.0;
    double r_pred = 0.0, se_pred = 0.0;
    double r_lep = 0.0, se_lep = 0.0;
    std::vector<ReplicationErrors> per_rep;  // empty unless retained
};

struct RiskTable {
    std::vector<RiskRow> rows;
};

struct EfficiencyRow {
    double sigma = 0.0;
    double eff_pred = 0.0;  // R_or / R_pred
    double eff_lep = 0.0;   // R_or / R_LEP
};

struct EfficiencyTable {
    std::vector<EfficiencyRow> rows;
    RiskTable risks;  // the aggregate risks the ratios come from
};

/// Seed-stream tag for random truths, kept apart from the noise streams.
inline constexpr std::uint64_t kTruthStream = 0x7472757468ULL;

/// Seed of replication `rep` in table row `row`: mix_seed(mix_seed(master, row), rep).
inline std::uint64_t replicate_seed(std::uint64_t master, std::size_t row, std::size_t rep) {
    return mix_seed(mix_seed(master, row), rep);
}

/// Mean and standard error (sample standard deviation / sqrt(m)).
struct MeanAndError {
    double mean = 0.0;
    double standard_error = 0.0;
};

inline MeanAndError summarize(std::span<const double> values) {
    const std::size_t m = values.size();
    detail::require(m >= 2, "need at least two replications");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(m);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(m - 1));
    return {mean, sd / std::sqrt(static_cast<double>(m))};
}

/// Fills means and standard errors of `row` from the given replications.
inline void aggregate_row(RiskRow& row, std::span<const ReplicationErrors> reps) {
    std::vector<double> buf(reps.size());
    auto fill = [&](double ReplicationErrors::*field, double& mean, double& se) {
        std::transform(reps.begin(), reps.end(), buf.begin(), [&](const ReplicationErrors& e) { return e.*field; });
        const auto s = summarize(buf);
        mean = s.mean;
        se = s.standard_error;
    };
    fill(&ReplicationErrors::err_or, row.r_or, row.se_or);
    fill(&ReplicationErrors::err_pred, row.r_pred, row.se_pred);
    fill(&ReplicationErrors::err_lep, row.r_lep, row.se_lep);
}

namespace detail {

/// Runs task(i) for i in [0, count) on up to `workers` threads and returns the
/// results in index order. The first exception thrown by any task is rethrown.
template <class Task>
auto run_indexed(std::size_t count, unsigned workers, Task&& task) {
    using Result = decltype(task(std::size_t{0}));
    std::vector<Result> results(count);
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = task(i);
        return results;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) results[i] = task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return ordered_sum(a.size(), [&](std::size_t k) {
        const double d = a[k] - b[k];
        return d * d;
    });
}

/// One replication against a precomputed table and oracle index.
inline ReplicationErrors replicate_with(const SpectralProblem& problem, const FilterTable& table,
                                        std::size_t oracle_index, std::uint64_t seed) {
    const Observations obs = sample_observations(problem, seed);
    const std::size_t pred_index = choose_pred(table, obs).grid_index;
    const std::size_t lep_index = choose_lepskii(table, obs).grid_index;
    std::vector<double> est(problem.size());
    auto error_at = [&](std::size_t j) {
        table.estimate(j, obs.values, est);
        return squared_distance(est, problem.truth());
    };
    return {error_at(oracle_index), error_at(pred_index), error_at(lep_index)};
}

inline SpectralProblem build_problem(const ProblemDescriptor& d, double sigma, std::uint64_t truth_seed) {
    if (d.kind == ProblemKind::Green) return make_green_problem(d.modes, d.truth, sigma);
    return make_diagonal_problem(d.modes, d.a, d.nu, sigma, truth_seed);
}

inline void validate(const ExperimentConfig& config) {
    require(config.replications >= 2, "replications must be at least 2");
    require(!config.sigmas.empty(), "sigmas must be nonempty");
    for (double s : config.sigmas) require(s > 0.0, "sigmas must be positive");
    require(config.grid_ratio > 1.0, "grid_ratio must exceed 1");
    require(config.problem.modes >= 1, "modes must be at least 1");
}

}  // namespace detail

/**
 * One Monte Carlo replication: draws observations from `replicate_seed` and
 * returns the squared errors ||f_alpha - f||^2 at the oracle, empirical-risk
 * and Lepskii choices. The oracle minimizes the closed-form direct risk.
 */
inline ReplicationErrors replicate_once(const SpectralProblem& problem, const FilterSpec& spec,
                                        const ParameterGrid& grid, std::uint64_t replicate_seed) {
    const FilterTable table(problem.eigenvalues(), problem.sigma(), spec, grid);
    const std::size_t oracle = choose_oracle(problem, spec, grid).grid_index;
    return detail::replicate_with(problem, table, oracle, replicate_seed);
}

/**
 * Risk table over a noise ladder with a fixed truth.
 *
 * Row i uses replication seeds replicate_seed(master_seed, i, j). Diagonal
 * problems draw their truth once from mix_seed(master_seed, kTruthStream).
 * Results are merged in replication order, so the table is identical for
 * any worker count.
 */
inline RiskTable run_rate_experiment(const ExperimentConfig& config, unsigned workers = 1) {
    detail::validate(config);
    const std::uint64_t truth_seed = mix_seed(config.master_seed, kTruthStream);
    RiskTable table;
    for (std::size_t row = 0; row < config.sigmas.size(); ++row) {
        const double sigma = config.sigmas[row];
        const SpectralProblem problem = detail::build_problem(config.problem, sigma, truth_seed);
        const ParameterGrid grid = build_grid(sigma, problem.lambda_max(), config.grid_ratio);
        const FilterTable filters(problem.eigenvalues(), sigma, config.filter, grid);
        const std::size_t oracle = choose_oracle(problem, config.filter, grid).grid_index;

        auto reps = detail::run_indexed(config.replications, workers, [&](std::size_t j) {
            return detail::replicate_with(problem, filters, oracle, replicate_seed(config.master_seed, row, j));
        });
        RiskRow r;
        r.sigma = sigma;
        aggregate_row(r, reps);
        if (config.retain_errors) r.per_rep = std::move(reps);
        table.rows.push_back(std::move(r));
    }
    return table;
}

/**
 * Efficiency ratios R_or / R_pred and R_or / R_LEP for random diagonal truths.
 *
 * Every replication draws a fresh truth from mix_seed(seed, kTruthStream) and
 * noise from seed = replicate_seed(master_seed, row, j); the oracle is
 * recomputed for each truth.
 */
inline EfficiencyTable run_efficiency_experiment(const ExperimentConfig& config, unsigned workers = 1) {
    detail::validate(config);
    detail::require(config.problem.kind == ProblemKind::Diagonal, "efficiency study needs a diagonal problem");
    const auto& d = config.problem;
    EfficiencyTable out;
    for (std::size_t row = 0; row < config.sigmas.size(); ++row) {
        const double sigma = config.sigmas[row];
        // The spectrum does not depend on the truth, so one table serves every replication.
        const SpectralProblem shape = make_diagonal_problem(d.modes, d.a, d.nu, sigma, 0);
        const ParameterGrid grid = build_grid(sigma, shape.lambda_max(), config.grid_ratio);
        const FilterTable filters(shape.eigenvalues(), sigma, config.filter, grid);

        auto reps = detail::run_indexed(config.replications, workers, [&](std::size_t j) {
            const std::uint64_t seed = replicate_seed(config.master_seed, row, j);
            const SpectralProblem problem = make_diagonal_problem(d.modes, d.a, d.nu, sigma, mix_seed(seed, kTruthStream));
            const std::size_t oracle = choose_oracle(problem, config.filter, grid).grid_index;
            return detail::replicate_with(problem, filters, oracle, seed);
        });
        RiskRow r;
        r.sigma = sigma;
        aggregate_row(r, reps);
        if (config.retain_errors) r.per_rep = std::move(reps);
        out.rows.push_back({sigma, r.r_or / r.r_pred, r.r_or / r.r_lep});
        out.risks.rows.push_back(std::move(r));
    }
    return out;
}

}  // namespace invreg
