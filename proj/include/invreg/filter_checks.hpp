#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "filters.hpp"

namespace invreg {

/// Outcome of one randomized filter property check.
struct FilterCheckResult {
    std::string family;
    std::string check;
    std::size_t trials = 0;
    std::size_t violations = 0;
};

/// Relative slack for rounding in the randomized inequalities.
inline constexpr double kFilterCheckTolerance = 1e-12;

/// Qualification constant C_v with sup_lambda lambda^v |1 - s_alpha(lambda)| <= C_v alpha^v,
/// or NaN where only an asymptotic constant is known (Landweber) or v exceeds
/// the qualification index.
inline double qualification_constant(const FilterSpec& spec, double v) {
    if (v <= 0.0 || v > spec.qualification_index()) return std::nan("");
    switch (spec.family()) {
        case FilterFamily::SpectralCutoff: return 1.0;
        case FilterFamily::Tikhonov: return std::pow(v, v) * std::pow(1.0 - v, 1.0 - v);
        case FilterFamily::IteratedTikhonov: {
            const double m = spec.iterations();
            return std::pow(v / m, v) * std::pow(1.0 - v / m, m - v);
        }
        case FilterFamily::Showalter: return std::pow(v / std::numbers::e, v);
        case FilterFamily::Landweber: return std::nan("");
    }
    return std::nan("");
}

namespace detail {

/// Log-uniform draw on [lo, hi] from the top 53 bits of one engine word.
inline double log_uniform(std::mt19937_64& engine, double lo, double hi) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return lo * std::exp(u * std::log(hi / lo));
}

}  // namespace detail

/**
 * Randomized check of the ordered-filter properties of one family.
 *
 * Each of `samples` trials draws lambda log-uniformly on [1e-12, 1] and
 * alpha_2 < alpha_1 log-uniformly on [1e-10, 10], then tests
 *   ordered:        q_{alpha_1}(lambda) <= q_{alpha_2}(lambda)
 *   bound_c_prime:  alpha |q_alpha(lambda)| <= C'
 *   bound_c_double: lambda |q_alpha(lambda)| <= C''
 *   range_s:        0 <= s_alpha(lambda) <= 1
 *   qualification_v=<v>: lambda^v |1 - s_alpha(lambda)| <= C_v alpha^v
 *                   for v in {0.25, 0.5, 1} where C_v is known.
 * All upper bounds allow a relative slack of kFilterCheckTolerance. The
 * qualification checks also allow 4 eps lambda^v, since 1 - s loses its
 * relative accuracy by cancellation once s is within rounding of 1.
 */
inline std::vector<FilterCheckResult> check_filter_invariants(const FilterSpec& spec, std::size_t samples,
                                                              std::uint64_t seed) {
    const std::string name = to_string(spec);
    std::vector<FilterCheckResult> results{
        {name, "ordered", 0, 0}, {name, "bound_c_prime", 0, 0}, {name, "bound_c_double_prime", 0, 0},
        {name, "range_s", 0, 0}};
    const std::vector<double> orders{0.25, 0.5, 1.0};
    std::vector<double> constants;
    for (double v : orders) {
        const double c = qualification_constant(spec, v);
        constants.push_back(c);
        if (!std::isnan(c)) results.push_back({name, "qualification_v=" + std::to_string(v).substr(0, 4), 0, 0});
    }

    auto tally = [](FilterCheckResult& r, bool ok) {
        ++r.trials;
        if (!ok) ++r.violations;
    };
    auto le = [](double lhs, double rhs) { return lhs <= rhs + kFilterCheckTolerance * std::abs(rhs); };

    std::mt19937_64 engine(seed);
    for (std::size_t t = 0; t < samples; ++t) {
        const double lambda = detail::log_uniform(engine, 1e-12, 1.0);
        double a1 = detail::log_uniform(engine, 1e-10, 10.0);
        double a2 = detail::log_uniform(engine, 1e-10, 10.0);
        if (a1 < a2) std::swap(a1, a2);
        if (a1 == a2) a1 *= 2.0;

        const double q1 = filter_value(spec, a1, lambda);
        const double q2 = filter_value(spec, a2, lambda);
        tally(results[0], le(q1, q2));
        tally(results[1], le(a2 * std::abs(q2), spec.c_prime()));
        tally(results[2], le(lambda * std::abs(q2), spec.c_double_prime()));
        const double s = s_value(spec, a2, lambda);
        tally(results[3], s >= 0.0 && le(s, 1.0));

        std::size_t slot = 4;
        for (std::size_t i = 0; i < orders.size(); ++i) {
            if (std::isnan(constants[i])) continue;
            const double v = orders[i];
            const double lhs = std::pow(lambda, v) * std::abs(1.0 - s);
            const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * std::pow(lambda, v);
            tally(results[slot++], le(lhs, constants[i] * std::pow(a2, v) + rounding));
        }
    }
    return results;
}

/// Every family with the iterated Tikhonov order m = 2 and m = 3.
inline std::vector<FilterSpec> all_filter_families() {
    return {FilterSpec::spectral_cutoff(), FilterSpec::tikhonov(), FilterSpec::iterated_tikhonov(2),
            FilterSpec::iterated_tikhonov(3), FilterSpec::landweber(), FilterSpec::showalter()};
}

}  // namespace invreg
