#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "filters.hpp"
#include "random.hpp"

namespace invreg {

/**
 * A diagonalized linear inverse problem Y_k = sqrt(lambda_k) f_k + sigma xi_k.
 *
 * `eigenvalues` are the eigenvalues of T*T, strictly positive and
 * non-increasing; `truth` holds the coefficients of f in the matching
 * eigenbasis. Immutable after construction.
 */
class SpectralProblem {
public:
    SpectralProblem(std::vector<double> eigenvalues, std::vector<double> truth, double sigma)
        : eigenvalues_(std::move(eigenvalues)), truth_(std::move(truth)), sigma_(sigma) {
        detail::require(!eigenvalues_.empty(), "problem needs at least one mode");
        detail::require(eigenvalues_.size() == truth_.size(), "eigenvalues and truth differ in length");
        detail::require(sigma_ > 0.0, "noise level sigma must be positive");
        for (std::size_t k = 0; k < eigenvalues_.size(); ++k) {
            detail::require(eigenvalues_[k] > 0.0, "eigenvalues must be strictly positive");
            if (k > 0) detail::require(eigenvalues_[k] <= eigenvalues_[k - 1], "eigenvalues must be non-increasing");
        }
    }

    std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    std::span<const double> truth() const noexcept { return truth_; }
    double sigma() const noexcept { return sigma_; }
    std::size_t size() const noexcept { return eigenvalues_.size(); }
    double lambda_max() const noexcept { return eigenvalues_.front(); }

    /// Same operator and truth at another noise level.
    SpectralProblem with_sigma(double sigma) const { return {eigenvalues_, truth_, sigma}; }

private:
    std::vector<double> eigenvalues_;
    std::vector<double> truth_;
    double sigma_;
};

/// Observed sequence Y_1..Y_n.
struct Observations {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

/// Coefficients of a regularized reconstruction in the eigenbasis.
struct EstimateCoefficients {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

/// Draws Y_k = sqrt(lambda_k) f_k + sigma xi_k with xi from NormalStream(replicate_seed),
/// consumed in ascending k. Identical seeds give bit-identical observations.
inline Observations sample_observations(const SpectralProblem& problem, std::uint64_t replicate_seed) {
    NormalStream noise(replicate_seed);
    const auto lambda = problem.eigenvalues();
    const auto f = problem.truth();
    Observations obs;
    obs.values.resize(problem.size());
    for (std::size_t k = 0; k < problem.size(); ++k)
        obs.values[k] = std::sqrt(lambda[k]) * f[k] + problem.sigma() * noise();
    return obs;
}

/// (f_alpha)_k = sqrt(lambda_k) q_alpha(lambda_k) Y_k.
inline EstimateCoefficients estimate_coefficients(std::span<const double> eigenvalues, const FilterSpec& spec,
                                                  double alpha, const Observations& obs) {
    detail::require(obs.size() == eigenvalues.size(), "observation length does not match the problem");
    EstimateCoefficients est;
    est.values.resize(eigenvalues.size());
    for (std::size_t k = 0; k < eigenvalues.size(); ++k)
        est.values[k] = std::sqrt(eigenvalues[k]) * filter_value(spec, alpha, eigenvalues[k]) * obs.values[k];
    return est;
}

inline EstimateCoefficients estimate_coefficients(const SpectralProblem& problem, const FilterSpec& spec, double alpha,
                                                  const Observations& obs) {
    return estimate_coefficients(problem.eigenvalues(), spec, alpha, obs);
}

}  // namespace invreg
