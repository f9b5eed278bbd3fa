#pragma once

#include <stdexcept>
#include <string>

namespace invreg {

/// Iterative numerical routine failed to reach its tolerance.
class numeric_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Replicated errors have zero spread, so their log-mean has no usable variance estimate.
class degenerate_variance_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Regression design has no spread in the regressor.
class singular_design_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw std::invalid_argument(message);
}

}  // namespace detail
}  // namespace invreg
