#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"
#include "filters.hpp"
#include "sequence_model.hpp"
#include "summation.hpp"

namespace invreg {

/// Squared-bias plus variance split of a quadratic risk; total = bias + variance.
struct RiskDecomposition {
    double bias_term = 0.0;
    double variance_term = 0.0;
    double total = 0.0;
};

namespace detail {

/// r_hat from precomputed s-values: sum s^2 Y^2 - 2 sum s Y^2 + 2 sigma^2 sum s.
inline double prediction_score(std::span<const double> s, std::span<const double> y, double sigma) {
    const std::size_t n = s.size();
    const double fit = ordered_sum(n, [&](std::size_t k) { return s[k] * s[k] * (y[k] * y[k]); });
    const double cross = ordered_sum(n, [&](std::size_t k) { return s[k] * (y[k] * y[k]); });
    const double dof = ordered_sum(n, [&](std::size_t k) { return s[k]; });
    return fit - 2.0 * cross + 2.0 * sigma * sigma * dof;
}

/// 4 sigma sqrt(sum lambda_k q_k^2) from precomputed q-values.
inline double lepskii_threshold_from(std::span<const double> lambda, std::span<const double> q, double sigma) {
    const double trace = ordered_sum(lambda.size(), [&](std::size_t k) { return lambda[k] * q[k] * q[k]; });
    return 4.0 * sigma * std::sqrt(trace);
}

}  // namespace detail

/// Prediction risk E||T(f_alpha - f)||^2 over the stored modes:
///   bias = sum lambda_k (1 - s_k)^2 f_k^2,  variance = sigma^2 sum s_k^2.
inline RiskDecomposition prediction_risk(const SpectralProblem& problem, const FilterSpec& spec, double alpha) {
    detail::require(alpha > 0.0, "alpha must be positive");
    const auto lambda = problem.eigenvalues();
    const auto f = problem.truth();
    const double sigma = problem.sigma();
    RiskDecomposition risk;
    risk.bias_term = detail::ordered_sum(problem.size(), [&](std::size_t k) {
        const double r = 1.0 - s_value(spec, alpha, lambda[k]);
        return lambda[k] * r * r * f[k] * f[k];
    });
    risk.variance_term = sigma * sigma * detail::ordered_sum(problem.size(), [&](std::size_t k) {
        const double s = s_value(spec, alpha, lambda[k]);
        return s * s;
    });
    risk.total = risk.bias_term + risk.variance_term;
    return risk;
}

/// Direct risk E||f_alpha - f||^2. For a diagonal linear estimator the
/// bias-variance split is an identity:
///   bias = sum (1 - s_k)^2 f_k^2,  variance = sigma^2 sum lambda_k q_k^2.
inline RiskDecomposition direct_risk(const SpectralProblem& problem, const FilterSpec& spec, double alpha) {
    detail::require(alpha > 0.0, "alpha must be positive");
    const auto lambda = problem.eigenvalues();
    const auto f = problem.truth();
    const double sigma = problem.sigma();
    RiskDecomposition risk;
    risk.bias_term = detail::ordered_sum(problem.size(), [&](std::size_t k) {
        const double r = 1.0 - s_value(spec, alpha, lambda[k]);
        return r * r * f[k] * f[k];
    });
    risk.variance_term = sigma * sigma * detail::ordered_sum(problem.size(), [&](std::size_t k) {
        const double q = filter_value(spec, alpha, lambda[k]);
        return lambda[k] * q * q;
    });
    risk.total = risk.bias_term + risk.variance_term;
    return risk;
}

/**
 * Empirical prediction-risk score
 *   r_hat(alpha, Y) = sum s_k^2 Y_k^2 - 2 sum s_k Y_k^2 + 2 sigma^2 sum s_k.
 *
 * E r_hat = r(alpha, f) - sum lambda_k f_k^2, so its minimizer over alpha is an
 * unbiased-risk choice that needs only the data and sigma.
 */
inline double empirical_prediction_risk(std::span<const double> eigenvalues, double sigma, const FilterSpec& spec,
                                        double alpha, const Observations& obs) {
    detail::require(obs.size() == eigenvalues.size(), "observation length does not match the problem");
    detail::require(alpha > 0.0, "alpha must be positive");
    std::vector<double> s(eigenvalues.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = s_value(spec, alpha, eigenvalues[k]);
    return detail::prediction_score(s, obs.values, sigma);
}

/// Lepskii balancing threshold 4 sigma sqrt(Trace(q_alpha(T*T)^2 T*T)) at alpha_tilde.
inline double lepskii_threshold(std::span<const double> eigenvalues, double sigma, const FilterSpec& spec,
                                double alpha_tilde) {
    detail::require(sigma > 0.0, "sigma must be positive");
    detail::require(alpha_tilde > 0.0, "alpha must be positive");
    std::vector<double> q(eigenvalues.size());
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = filter_value(spec, alpha_tilde, eigenvalues[k]);
    return detail::lepskii_threshold_from(eigenvalues, q, sigma);
}

}  // namespace invreg
