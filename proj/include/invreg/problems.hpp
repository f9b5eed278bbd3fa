#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "random.hpp"
#include "sequence_model.hpp"

namespace invreg {

/// Truth functions on [0, 1] used with the Green-kernel operator.
enum class TestFunction {
    HatFunction,  // x on [0, 1/2], 1 - x on [1/2, 1]
    Indicator     // 1 on [1/4, 3/4], 0 elsewhere
};

inline const char* to_string(TestFunction f) {
    return f == TestFunction::HatFunction ? "hat" : "indicator";
}

/**
 * Closed-form coefficient f_k in the unnormalized sine convention (k >= 1):
 *
 *   hat:       f_k = ((-1)^k - 1) / (4 pi^3 k^2)
 *   indicator: f_k = (-1)^k sin(pi k / 2) / (2 pi^2 k)
 *
 * These are not inner products with an orthonormal basis; see
 * green_truth_coefficient.
 */
inline double unnormalized_green_coefficient(TestFunction truth, long k) {
    constexpr double pi = std::numbers::pi;
    const double kd = static_cast<double>(k);
    if (k % 2 == 0) return 0.0;
    if (truth == TestFunction::HatFunction) return -2.0 / (4.0 * pi * pi * pi * kd * kd);
    // odd k: (-1)^k = -1, sin(pi k / 2) = +1 for k = 1 mod 4 and -1 for k = 3 mod 4
    const double sine = (k % 4 == 1) ? 1.0 : -1.0;
    return -sine / (2.0 * pi * pi * kd);
}

/**
 * Exact coefficient <f, e_k> against the eigenbasis e_k(x) = sqrt(2) sin(k pi x)
 * of the Green-kernel operator (k >= 1):
 *
 *   hat:       f_k = 2 sqrt(2) sin(k pi / 2) / (pi^2 k^2)
 *   indicator: f_k = 2 sqrt(2) sin(k pi / 2) sin(k pi / 4) / (pi k)
 *
 * Relative to unnormalized_green_coefficient the magnitudes differ by the fixed
 * factors 4 sqrt(2) pi (hat) and 4 pi (indicator), and some odd
 * coefficients differ in sign. Even coefficients vanish exactly.
 */
inline double green_truth_coefficient(TestFunction truth, long k) {
    constexpr double pi = std::numbers::pi;
    const double kd = static_cast<double>(k);
    if (k % 2 == 0) return 0.0;
    const double half_sine = (k % 4 == 1) ? 1.0 : -1.0;  // sin(k pi / 2)
    if (truth == TestFunction::HatFunction) return 2.0 * std::numbers::sqrt2 * half_sine / (pi * pi * kd * kd);
    const double quarter_sign = (k % 8 == 1 || k % 8 == 3) ? 1.0 : -1.0;  // sign of sin(k pi / 4)
    return 2.0 * half_sine * quarter_sign / (pi * kd);
}

/// Sequence-space form of the Green-kernel problem: lambda_k = (pi k)^-4 and
/// the orthonormal-basis truth coefficients, k = 1..n_modes.
inline SpectralProblem make_green_problem(long n_modes, TestFunction truth, double sigma) {
    detail::require(n_modes >= 1, "need at least one mode");
    std::vector<double> lambda(static_cast<std::size_t>(n_modes));
    std::vector<double> f(lambda.size());
    for (long k = 1; k <= n_modes; ++k) {
        const double pk = std::numbers::pi * static_cast<double>(k);
        const double pk2 = pk * pk;
        lambda[k - 1] = 1.0 / (pk2 * pk2);
        f[k - 1] = green_truth_coefficient(truth, k);
    }
    return {std::move(lambda), std::move(f), sigma};
}

/// Relative spread of the multiplicative perturbation in random diagonal truths.
inline constexpr double kDiagonalTruthPerturbation = 0.1;

/**
 * Diagonal operator with singular values k^-a (so lambda_k = k^-2a) and a random
 * truth f_k = +-k^-nu (1 + 0.1 z_k).
 *
 * NormalStream(seed) is consumed per mode in ascending k: one sign word, then
 * one normal variate.
 */
inline SpectralProblem make_diagonal_problem(long n, double a, double nu, double sigma, std::uint64_t seed) {
    detail::require(n >= 1, "need at least one mode");
    detail::require(a > 0.0 && nu > 0.0, "a and nu must be positive");
    NormalStream stream(seed);
    std::vector<double> lambda(static_cast<std::size_t>(n));
    std::vector<double> f(lambda.size());
    for (long k = 1; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        lambda[k - 1] = std::pow(kd, -2.0 * a);
        const double sign = stream.sign();
        f[k - 1] = sign * std::pow(kd, -nu) * (1.0 + kDiagonalTruthPerturbation * stream());
    }
    return {std::move(lambda), std::move(f), sigma};
}

/// Dense symmetric matrix in row-major storage.
class DenseSymmetricMatrix {
public:
    explicit DenseSymmetricMatrix(std::size_t order) : order_(order), entries_(order * order, 0.0) {}

    std::size_t order() const noexcept { return order_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * order_ + j]; }

    /// Writes both (i, j) and (j, i), so symmetry holds bit for bit.
    void set(std::size_t i, std::size_t j, double value) {
        entries_[i * order_ + j] = value;
        entries_[j * order_ + i] = value;
    }

    double frobenius_norm() const {
        double sum = 0.0;
        for (double x : entries_) sum += x * x;
        return std::sqrt(sum);
    }

private:
    std::size_t order_;
    std::vector<double> entries_;
};

/// Green kernel of -d^2/dx^2 on [0, 1] with Dirichlet conditions.
inline double green_kernel(double x, double y) { return std::min(x * (1.0 - y), y * (1.0 - x)); }

/// Composite-midpoint Nystrom matrix M_ij = k(x_i, x_j) / n with x_i = (2i - 1) / (2n).
inline DenseSymmetricMatrix discretize_integral_operator(std::size_t n) {
    detail::require(n >= 2, "discretization needs n >= 2");
    DenseSymmetricMatrix m(n);
    const double nd = static_cast<double>(n);
    auto node = [&](std::size_t i) { return (2.0 * static_cast<double>(i) + 1.0) / (2.0 * nd); };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m.set(i, j, green_kernel(node(i), node(j)) / nd);
    return m;
}

inline constexpr int kJacobiMaxSweeps = 50;
inline constexpr double kJacobiTolerance = 1e-12;

/**
 * The `count` largest eigenvalues of a symmetric matrix, descending.
 *
 * Cyclic Jacobi: sweeps of row-by-row rotations, each zeroing one
 * off-diagonal pair, until the off-diagonal Frobenius mass drops below
 * 1e-12 ||M||_F. Throws numeric_failure after 50 sweeps.
 */
inline std::vector<double> symmetric_eigenvalues(const DenseSymmetricMatrix& m, std::size_t count) {
    const std::size_t n = m.order();
    detail::require(count <= n, "requested more eigenvalues than the matrix order");
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

    const double target = kJacobiTolerance * m.frobenius_norm();
    auto off_norm = [&] {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) sum += 2.0 * at(i, j) * at(i, j);
        return std::sqrt(sum);
    };

    int sweep = 0;
    while (off_norm() > target) {
        if (sweep++ == kJacobiMaxSweeps) throw numeric_failure("Jacobi eigensolver did not converge in 50 sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> eigenvalues(n);
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = at(i, i);
    std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
    eigenvalues.resize(count);
    return eigenvalues;
}

}  // namespace invreg
