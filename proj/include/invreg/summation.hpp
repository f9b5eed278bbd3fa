#pragma once

#include <cmath>
#include <cstddef>

namespace invreg::detail {

/// Sequences at least this long are accumulated with Neumaier compensation.
inline constexpr std::size_t kCompensatedSumThreshold = 10000;

/// Sums term(0) + term(1) + ... + term(n-1) in ascending index order.
template <class Term>
double ordered_sum(std::size_t n, Term&& term) {
    if (n < kCompensatedSumThreshold) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) sum += term(k);
        return sum;
    }
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = term(k);
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    return sum + carry;
}

}  // namespace invreg::detail
