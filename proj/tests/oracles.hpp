#pragma once

// Naive reference implementations used as test oracles. They share only the
// filter primitives with the library and recompute everything else with
// plain loops.

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "invreg/filters.hpp"
#include "invreg/param_select.hpp"
#include "invreg/sequence_model.hpp"

namespace oracle {

inline std::size_t naive_oracle_index(const invreg::SpectralProblem& p, const invreg::FilterSpec& spec,
                                      const invreg::ParameterGrid& grid) {
    const auto lambda = p.eigenvalues();
    const auto f = p.truth();
    std::size_t best = 0;
    double best_risk = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double bias = 0.0, var = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double r = 1.0 - invreg::s_value(spec, grid.values[j], lambda[k]);
            const double q = invreg::filter_value(spec, grid.values[j], lambda[k]);
            bias += r * r * f[k] * f[k];
            var += lambda[k] * q * q;
        }
        const double risk = bias + p.sigma() * p.sigma() * var;
        if (j == 0 || risk < best_risk) {
            best = j;
            best_risk = risk;
        }
    }
    return best;
}

inline double naive_score(const std::vector<double>& lambda, double sigma, const invreg::FilterSpec& spec,
                          double alpha, const std::vector<double>& y) {
    double fit = 0.0, cross = 0.0, dof = 0.0;
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        const double s = invreg::s_value(spec, alpha, lambda[k]);
        fit += s * s * (y[k] * y[k]);
        cross += s * (y[k] * y[k]);
        dof += s;
    }
    return fit - 2.0 * cross + 2.0 * sigma * sigma * dof;
}

inline std::size_t naive_pred_index(const std::vector<double>& lambda, double sigma, const invreg::FilterSpec& spec,
                                    const invreg::ParameterGrid& grid, const std::vector<double>& y) {
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double score = naive_score(lambda, sigma, spec, grid.values[j], y);
        if (j == 0 || score < best_score) {
            best = j;
            best_score = score;
        }
    }
    return best;
}

/// Largest j such that every i < j satisfies ||f_i - f_j|| <= 4 sigma sqrt(sum lambda q_i^2).
inline std::size_t naive_lepskii_index(const std::vector<double>& lambda, double sigma,
                                       const invreg::FilterSpec& spec, const invreg::ParameterGrid& grid,
                                       const std::vector<double>& y) {
    const std::size_t count = grid.size();
    const std::size_t n = lambda.size();
    std::vector<std::vector<double>> est(count, std::vector<double>(n));
    std::vector<double> threshold(count);
    for (std::size_t j = 0; j < count; ++j) {
        double trace = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double q = invreg::filter_value(spec, grid.values[j], lambda[k]);
            est[j][k] = std::sqrt(lambda[k]) * q * y[k];
            trace += lambda[k] * q * q;
        }
        threshold[j] = 4.0 * sigma * std::sqrt(trace);
    }
    std::size_t chosen = 0;
    for (std::size_t j = 0; j < count; ++j) {
        bool ok = true;
        for (std::size_t i = 0; i < j; ++i) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < n; ++k) d2 += (est[i][k] - est[j][k]) * (est[i][k] - est[j][k]);
            if (std::sqrt(d2) > threshold[i]) ok = false;
        }
        if (ok) chosen = j;
    }
    return chosen;
}

/// A random problem with at most 20 modes and sigma^2 well below lambda_1.
inline invreg::SpectralProblem random_small_problem(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> modes(1, 20);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal;
    const int n = modes(rng);
    std::vector<double> lambda(n), f(n);
    for (int k = 0; k < n; ++k) {
        lambda[k] = std::pow(10.0, -6.0 * unit(rng));
        f[k] = normal(rng) * std::pow(k + 1.0, -1.0);
    }
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    const double sigma = std::sqrt(lambda[0]) * std::pow(10.0, -0.5 - 2.5 * unit(rng));
    return {lambda, f, sigma};
}

inline const std::vector<invreg::FilterSpec>& rotation() {
    static const std::vector<invreg::FilterSpec> specs{
        invreg::FilterSpec::tikhonov(), invreg::FilterSpec::spectral_cutoff(), invreg::FilterSpec::iterated_tikhonov(2),
        invreg::FilterSpec::landweber(), invreg::FilterSpec::showalter()};
    return specs;
}

}  // namespace oracle
