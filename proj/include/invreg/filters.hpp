#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace invreg {

/// Ordered filter families. Larger alpha always means stronger smoothing.
enum class FilterFamily {
    SpectralCutoff,    // 1/lambda on [alpha, inf), 0 below
    Tikhonov,          // 1/(lambda + alpha)
    IteratedTikhonov,  // (1 - (alpha/(lambda+alpha))^m) / lambda
    Landweber,         // sum_{j<floor(1/alpha)} (1 - lambda)^j, needs lambda <= 1
    Showalter          // (1 - exp(-lambda/alpha)) / lambda
};

/**
 * A filter family together with its bound constants and qualification index.
 *
 * Instances are built through the named factories, which fill in the
 * constants of the family:
 *
 *   family             C'   C''  qualification
 *   SpectralCutoff     1    1    inf
 *   Tikhonov           1    1    1
 *   IteratedTikhonov   m    1    m
 *   Landweber          1    1    inf
 *   Showalter          1    1    inf
 */
class FilterSpec {
public:
    static FilterSpec spectral_cutoff() { return {FilterFamily::SpectralCutoff, 1, 1.0, 1.0, kInf}; }
    static FilterSpec tikhonov() { return {FilterFamily::Tikhonov, 1, 1.0, 1.0, 1.0}; }
    static FilterSpec iterated_tikhonov(int m) {
        detail::require(m >= 1, "iterated Tikhonov needs m >= 1");
        return {FilterFamily::IteratedTikhonov, m, static_cast<double>(m), 1.0, static_cast<double>(m)};
    }
    static FilterSpec landweber() { return {FilterFamily::Landweber, 1, 1.0, 1.0, kInf}; }
    static FilterSpec showalter() { return {FilterFamily::Showalter, 1, 1.0, 1.0, kInf}; }

    FilterFamily family() const noexcept { return family_; }
    /// Iteration count m; 1 for every family except IteratedTikhonov.
    int iterations() const noexcept { return iterations_; }
    double c_prime() const noexcept { return c_prime_; }
    double c_double_prime() const noexcept { return c_double_prime_; }
    double qualification_index() const noexcept { return qualification_; }

    friend bool operator==(const FilterSpec&, const FilterSpec&) = default;

private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    FilterSpec(FilterFamily family, int m, double cp, double cpp, double qual)
        : family_(family), iterations_(m), c_prime_(cp), c_double_prime_(cpp), qualification_(qual) {}

    FilterFamily family_;
    int iterations_;
    double c_prime_;
    double c_double_prime_;
    double qualification_;
};

inline std::string to_string(const FilterSpec& spec) {
    switch (spec.family()) {
        case FilterFamily::SpectralCutoff: return "spectral_cutoff";
        case FilterFamily::Tikhonov: return "tikhonov";
        case FilterFamily::IteratedTikhonov: return "iterated_tikhonov(" + std::to_string(spec.iterations()) + ")";
        case FilterFamily::Landweber: return "landweber";
        case FilterFamily::Showalter: return "showalter";
    }
    return "unknown";
}

/// Parses a family name as written by the config files; `m` is used only for
/// iterated_tikhonov.
inline FilterSpec parse_filter(std::string_view family, int m = 2) {
    if (family == "spectral_cutoff") return FilterSpec::spectral_cutoff();
    if (family == "tikhonov") return FilterSpec::tikhonov();
    if (family == "iterated_tikhonov") return FilterSpec::iterated_tikhonov(m);
    if (family == "landweber") return FilterSpec::landweber();
    if (family == "showalter") return FilterSpec::showalter();
    throw std::invalid_argument("unknown filter family '" + std::string(family) + "'");
}

namespace detail {

/// Below this ratio lambda/alpha Showalter switches to its two-term Taylor form.
inline constexpr double kShowalterTaylorCutoff = 1e-8;

inline void check_filter_args(const FilterSpec& spec, double alpha, double lambda) {
    require(alpha > 0.0, "filter parameter alpha must be positive");
    require(lambda >= 0.0, "spectral value lambda must be nonnegative");
    if (spec.family() == FilterFamily::Landweber)
        require(lambda <= 1.0, "Landweber needs lambda <= 1 (operator norm at most one)");
}

/// Number of Landweber steps, floor(1/alpha). Zero for alpha > 1.
inline double landweber_steps(double alpha) { return std::floor(1.0 / alpha); }

/// 1 - (1 - t)^power without cancellation for small t.
inline double one_minus_pow_complement(double t, double power) {
    if (power == 0.0) return 0.0;
    return -std::expm1(power * std::log1p(-t));
}

}  // namespace detail

/// s_alpha(lambda) = lambda * q_alpha(lambda), evaluated in each family's
/// stable closed form. Lies in [0, 1] for every family.
inline double s_value(const FilterSpec& spec, double alpha, double lambda) {
    detail::check_filter_args(spec, alpha, lambda);
    if (lambda == 0.0) return 0.0;
    switch (spec.family()) {
        case FilterFamily::SpectralCutoff:
            return lambda >= alpha ? 1.0 : 0.0;
        case FilterFamily::Tikhonov:
            return lambda / (lambda + alpha);
        case FilterFamily::IteratedTikhonov:
            return detail::one_minus_pow_complement(lambda / (lambda + alpha), spec.iterations());
        case FilterFamily::Landweber:
            return detail::one_minus_pow_complement(lambda, detail::landweber_steps(alpha));
        case FilterFamily::Showalter: {
            const double x = lambda / alpha;
            if (x < detail::kShowalterTaylorCutoff) return x * (1.0 - 0.5 * x);
            return -std::expm1(-x);
        }
    }
    return 0.0;
}

/// q_alpha(lambda), the regularized replacement of 1/lambda. Finite at lambda = 0
/// (the continuous limit) for every family.
inline double filter_value(const FilterSpec& spec, double alpha, double lambda) {
    detail::check_filter_args(spec, alpha, lambda);
    if (lambda == 0.0) {
        switch (spec.family()) {
            case FilterFamily::SpectralCutoff: return 0.0;
            case FilterFamily::Tikhonov: return 1.0 / alpha;
            case FilterFamily::IteratedTikhonov: return spec.iterations() / alpha;
            case FilterFamily::Landweber: return detail::landweber_steps(alpha);
            case FilterFamily::Showalter: return 1.0 / alpha;
        }
    }
    switch (spec.family()) {
        case FilterFamily::SpectralCutoff:
            return lambda >= alpha ? 1.0 / lambda : 0.0;
        case FilterFamily::Tikhonov:
            return 1.0 / (lambda + alpha);
        case FilterFamily::Showalter: {
            const double x = lambda / alpha;
            if (x < detail::kShowalterTaylorCutoff) return (1.0 - 0.5 * x) / alpha;
            return -std::expm1(-x) / lambda;
        }
        case FilterFamily::IteratedTikhonov:
        case FilterFamily::Landweber:
            return s_value(spec, alpha, lambda) / lambda;
    }
    return 0.0;
}

}  // namespace invreg
