#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <vector>

#include "errors.hpp"
#include "montecarlo.hpp"
#include "param_select.hpp"

namespace invreg {

/// Standard normal distribution function, 0.5 erfc(-x / sqrt 2).
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/**
 * Delta-method standard deviation of log(mean error):
 *   delta = sqrt(sum_j (e_j - mean)^2) / (sqrt(m) |mean|).
 *
 * Throws invalid_argument for m < 2 or a zero mean, and
 * degenerate_variance_error when all errors coincide.
 */
inline double estimate_delta(std::span<const double> errors) {
    const std::size_t m = errors.size();
    detail::require(m >= 2, "delta estimate needs at least two errors");
    double sum = 0.0;
    for (double e : errors) sum += e;
    const double mean = sum / static_cast<double>(m);
    detail::require(mean != 0.0, "delta estimate needs a nonzero mean error");
    double ss = 0.0;
    for (double e : errors) ss += (e - mean) * (e - mean);
    if (ss == 0.0) throw degenerate_variance_error("replicated errors have zero variance");
    return std::sqrt(ss) / (std::sqrt(static_cast<double>(m)) * std::abs(mean));
}

/// Replicated squared errors at one noise level.
struct RateSample {
    double sigma = 0.0;
    std::vector<double> errors;
    double mean = 0.0;
    double delta = 0.0;
};

inline RateSample make_rate_sample(double sigma, std::vector<double> errors) {
    detail::require(sigma > 0.0, "sigma must be positive");
    RateSample s;
    s.sigma = sigma;
    s.delta = estimate_delta(errors);
    double sum = 0.0;
    for (double e : errors) sum += e;
    s.mean = sum / static_cast<double>(errors.size());
    s.errors = std::move(errors);
    return s;
}

struct SlopeFit {
    double theta_hat = 0.0;  // slope of log mean error against log sigma
    double rho_hat = 0.0;    // intercept
};

namespace detail {

struct WeightedMoments {
    double w = 0.0, wx = 0.0, wxx = 0.0, wy = 0.0, wxy = 0.0;

    double design() const { return w * wxx - wx * wx; }
};

inline WeightedMoments weighted_moments(std::span<const double> x, std::span<const double> y,
                                        std::span<const double> deltas) {
    require(x.size() == y.size() && x.size() == deltas.size(), "fit inputs differ in length");
    require(x.size() >= 2, "fit needs at least two points");
    bool distinct = false;
    WeightedMoments m;
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(deltas[i] > 0.0, "deltas must be positive");
        if (x[i] != x[0]) distinct = true;
        const double w = 1.0 / (deltas[i] * deltas[i]);
        m.w += w;
        m.wx += w * x[i];
        m.wxx += w * x[i] * x[i];
        m.wy += w * y[i];
        m.wxy += w * x[i] * y[i];
    }
    if (!distinct || !(m.design() > 0.0)) throw singular_design_error("all log sigma values coincide");
    return m;
}

}  // namespace detail

/// Weighted least squares of log_means on log_sigmas with weights delta^-2.
inline SlopeFit weighted_slope_fit(std::span<const double> log_sigmas, std::span<const double> log_means,
                                   std::span<const double> deltas) {
    const auto m = detail::weighted_moments(log_sigmas, log_means, deltas);
    SlopeFit fit;
    fit.theta_hat = (m.w * m.wxy - m.wx * m.wy) / m.design();
    fit.rho_hat = (m.wy - fit.theta_hat * m.wx) / m.w;
    return fit;
}

struct RateTestResult {
    double theta_hat = 0.0;
    double rho_hat = 0.0;
    double statistic = 0.0;
    double p_value = 0.0;
    double theta_target = 0.0;
    std::map<double, bool> reject_at;  // level -> p_value < level
};

inline const std::vector<double> kDefaultTestLevels{0.01, 0.05, 0.10};

/**
 * One-sided test of H0: theta >= theta_target against H1: theta < theta_target
 * for the model log mean_i = theta log sigma_i + rho + N(0, delta_i^2).
 *
 *   T = (theta_hat - theta_target) sqrt(design / sum delta_i^-2),
 *   p = Phi(T), rejected at level L iff p < L.
 */
inline RateTestResult rate_test(std::span<const RateSample> samples, double theta_target,
                                std::span<const double> levels = kDefaultTestLevels) {
    detail::require(samples.size() >= 3, "rate test needs at least three noise levels");
    std::vector<double> x, y, d;
    for (const auto& s : samples) {
        detail::require(s.mean > 0.0, "mean errors must be positive to take logarithms");
        x.push_back(std::log(s.sigma));
        y.push_back(std::log(s.mean));
        d.push_back(s.delta);
    }
    const auto moments = detail::weighted_moments(x, y, d);
    const auto fit = weighted_slope_fit(x, y, d);
    RateTestResult result;
    result.theta_hat = fit.theta_hat;
    result.rho_hat = fit.rho_hat;
    result.theta_target = theta_target;
    result.statistic = (fit.theta_hat - theta_target) * std::sqrt(moments.design() / moments.w);
    result.p_value = normal_cdf(result.statistic);
    for (double level : levels) result.reject_at[level] = result.p_value < level;
    return result;
}

/// Rate samples of one rule from a risk table with retained per-replication errors.
inline std::vector<RateSample> rate_samples(const RiskTable& table, SelectionRule rule) {
    detail::require(rule != SelectionRule::APriori, "risk tables hold oracle, pred and lepskii errors only");
    std::vector<RateSample> samples;
    for (const auto& row : table.rows) {
        detail::require(!row.per_rep.empty(), "risk table has no retained per-replication errors");
        std::vector<double> errors;
        errors.reserve(row.per_rep.size());
        for (const auto& e : row.per_rep)
            errors.push_back(rule == SelectionRule::Oracle ? e.err_or
                             : rule == SelectionRule::Pred ? e.err_pred
                                                           : e.err_lep);
        samples.push_back(make_rate_sample(row.sigma, std::move(errors)));
    }
    return samples;
}

}  // namespace invreg
