#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "errors.hpp"
#include "filters.hpp"
#include "risk.hpp"
#include "sequence_model.hpp"
#include "summation.hpp"

namespace invreg {

/// Logarithmically equispaced candidates sigma^2 r^j, j = 0..K, covering [sigma^2, lambda_max].
struct ParameterGrid {
    double ratio = 1.2;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

/// Ratio used throughout the simulation studies.
inline constexpr double kDefaultGridRatio = 1.2;

/**
 * Builds {sigma^2 r^j : j = 0..K} with K = floor(log(lambda_max / sigma^2) / log r).
 *
 * The floor is taken with a relative slack of 1e-12 so that lambda_max lying
 * exactly on a power of r (up to rounding) is included.
 */
inline ParameterGrid build_grid(double sigma, double lambda_max, double ratio = kDefaultGridRatio) {
    detail::require(sigma > 0.0 && lambda_max > 0.0, "sigma and lambda_max must be positive");
    detail::require(ratio > 1.0, "grid ratio must exceed 1");
    const double base = sigma * sigma;
    detail::require(base < lambda_max, "empty grid: sigma^2 must be below lambda_max");

    constexpr double slack = 1e-12;
    auto fits = [&](long j) { return base * std::pow(ratio, static_cast<double>(j)) <= lambda_max * (1.0 + slack); };
    long top = static_cast<long>(std::floor(std::log(lambda_max / base) / std::log(ratio)));
    while (fits(top + 1)) ++top;
    while (top > 0 && !fits(top)) --top;

    ParameterGrid grid;
    grid.ratio = ratio;
    grid.values.reserve(static_cast<std::size_t>(top) + 1);
    for (long j = 0; j <= top; ++j) grid.values.push_back(base * std::pow(ratio, static_cast<double>(j)));
    return grid;
}

enum class SelectionRule { Oracle, Pred, Lepskii, APriori };

inline const char* to_string(SelectionRule rule) {
    switch (rule) {
        case SelectionRule::Oracle: return "oracle";
        case SelectionRule::Pred: return "pred";
        case SelectionRule::Lepskii: return "lepskii";
        case SelectionRule::APriori: return "apriori";
    }
    return "unknown";
}

/// A chosen grid point. `score` is the deciding quantity of the rule: the
/// direct risk (Oracle), r_hat (Pred), the largest balancing distance
/// (Lepskii), or the unsnapped a-priori alpha (APriori).
struct Selection {
    double alpha = 0.0;
    std::size_t grid_index = 0;
    SelectionRule rule = SelectionRule::Oracle;
    double score = 0.0;
};

/**
 * Filter values of one spectrum evaluated on every grid point.
 *
 * Row j holds s_{alpha_j}(lambda_k) and q_{alpha_j}(lambda_k) for all modes,
 * together with the per-row Lepskii threshold. Building it once per noise
 * level lets many replications share the expensive transcendental work.
 */
class FilterTable {
public:
    FilterTable(std::span<const double> eigenvalues, double sigma, const FilterSpec& spec, const ParameterGrid& grid)
        : lambda_(eigenvalues.begin(), eigenvalues.end()),
          sqrt_lambda_(eigenvalues.size()),
          alphas_(grid.values),
          sigma_(sigma),
          s_(grid.size() * eigenvalues.size()),
          q_(grid.size() * eigenvalues.size()),
          thresholds_(grid.size()) {
        detail::require(!alphas_.empty(), "grid is empty");
        detail::require(sigma >= 0.0, "sigma must be nonnegative");
        const std::size_t n = lambda_.size();
        for (std::size_t k = 0; k < n; ++k) sqrt_lambda_[k] = std::sqrt(lambda_[k]);
        for (std::size_t j = 0; j < alphas_.size(); ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                s_[j * n + k] = s_value(spec, alphas_[j], lambda_[k]);
                q_[j * n + k] = filter_value(spec, alphas_[j], lambda_[k]);
            }
            thresholds_[j] = detail::lepskii_threshold_from(lambda_, q(j), sigma);
        }
    }

    std::size_t modes() const noexcept { return lambda_.size(); }
    std::size_t grid_size() const noexcept { return alphas_.size(); }
    double alpha(std::size_t j) const { return alphas_[j]; }
    double sigma() const noexcept { return sigma_; }
    std::span<const double> eigenvalues() const noexcept { return lambda_; }
    std::span<const double> s(std::size_t j) const { return {s_.data() + j * modes(), modes()}; }
    std::span<const double> q(std::size_t j) const { return {q_.data() + j * modes(), modes()}; }
    double threshold(std::size_t j) const { return thresholds_[j]; }

    /// Estimate coefficients for grid point j, written into `out`.
    void estimate(std::size_t j, std::span<const double> y, std::span<double> out) const {
        const auto qj = q(j);
        for (std::size_t k = 0; k < modes(); ++k) out[k] = sqrt_lambda_[k] * qj[k] * y[k];
    }

private:
    std::vector<double> lambda_;
    std::vector<double> sqrt_lambda_;
    std::vector<double> alphas_;
    double sigma_;
    std::vector<double> s_;
    std::vector<double> q_;
    std::vector<double> thresholds_;
};

/// Minimizer of the closed-form direct risk over the grid; ties go to the smallest index.
inline Selection choose_oracle(const SpectralProblem& problem, const FilterSpec& spec, const ParameterGrid& grid) {
    detail::require(grid.size() > 0, "grid is empty");
    Selection best{grid.values[0], 0, SelectionRule::Oracle, std::numeric_limits<double>::infinity()};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double risk = direct_risk(problem, spec, grid.values[j]).total;
        if (risk < best.score) best = {grid.values[j], j, SelectionRule::Oracle, risk};
    }
    return best;
}

/// Minimizer of r_hat(alpha, Y) over the table's grid; ties go to the smallest index.
inline Selection choose_pred(const FilterTable& table, const Observations& obs) {
    detail::require(obs.size() == table.modes(), "observation length does not match the problem");
    Selection best{table.alpha(0), 0, SelectionRule::Pred, std::numeric_limits<double>::infinity()};
    for (std::size_t j = 0; j < table.grid_size(); ++j) {
        const double score = detail::prediction_score(table.s(j), obs.values, table.sigma());
        if (score < best.score) best = {table.alpha(j), j, SelectionRule::Pred, score};
    }
    return best;
}

inline Selection choose_pred(std::span<const double> eigenvalues, double sigma, const FilterSpec& spec,
                             const ParameterGrid& grid, const Observations& obs) {
    return choose_pred(FilterTable(eigenvalues, sigma, spec, grid), obs);
}

/**
 * Lepskii balancing choice: the largest grid alpha such that
 *   ||f_{alpha~} - f_alpha|| <= 4 sigma sqrt(sum lambda_k q_{alpha~}(lambda_k)^2)
 * for every grid alpha~ <= alpha.
 *
 * All estimates are cached first; candidates are then tried from the top of
 * the grid down, and each candidate stops at its first violated pair. The
 * smallest grid point satisfies the condition vacuously, so index 0 is the
 * fallback.
 */
inline Selection choose_lepskii(const FilterTable& table, const Observations& obs) {
    detail::require(obs.size() == table.modes(), "observation length does not match the problem");
    const std::size_t n = table.modes();
    const std::size_t count = table.grid_size();
    std::vector<double> estimates(count * n);
    for (std::size_t j = 0; j < count; ++j) table.estimate(j, obs.values, {estimates.data() + j * n, n});

    auto distance = [&](std::size_t i, std::size_t j) {
        const double* a = estimates.data() + i * n;
        const double* b = estimates.data() + j * n;
        return std::sqrt(detail::ordered_sum(n, [&](std::size_t k) {
            const double d = a[k] - b[k];
            return d * d;
        }));
    };

    for (std::size_t j = count - 1; j > 0; --j) {
        double widest = 0.0;
        bool admissible = true;
        for (std::size_t i = 0; i < j; ++i) {
            const double d = distance(i, j);
            if (d > table.threshold(i)) {
                admissible = false;
                break;
            }
            widest = std::max(widest, d);
        }
        if (admissible) return {table.alpha(j), j, SelectionRule::Lepskii, widest};
    }
    return {table.alpha(0), 0, SelectionRule::Lepskii, 0.0};
}

inline Selection choose_lepskii(std::span<const double> eigenvalues, double sigma, const FilterSpec& spec,
                                const ParameterGrid& grid, const Observations& obs) {
    return choose_lepskii(FilterTable(eigenvalues, sigma, spec, grid), obs);
}

/// A-priori parameter for lambda_k = C_a k^-a and truth smoothness b:
///   alpha_* = C_a^{1/(1+a+b)} sigma^{2a/(1+a+b)}.
inline double apriori_alpha_polynomial(double a, double c_a, double b, double sigma) {
    detail::require(a > 1.0, "decay exponent a must exceed 1");
    detail::require(c_a > 0.0 && b > 0.0 && sigma > 0.0, "C_a, b and sigma must be positive");
    const double denom = 1.0 + a + b;
    return std::pow(c_a, 1.0 / denom) * std::pow(sigma, 2.0 * a / denom);
}

/// Snaps alpha_* to the largest grid point not above it (index 0 if none).
inline Selection choose_apriori_polynomial(const ParameterGrid& grid, double a, double c_a, double b, double sigma) {
    detail::require(grid.size() > 0, "grid is empty");
    const double target = apriori_alpha_polynomial(a, c_a, b, sigma);
    std::size_t j = 0;
    while (j + 1 < grid.size() && grid.values[j + 1] <= target) ++j;
    return {grid.values[j], j, SelectionRule::APriori, target};
}

}  // namespace invreg
