#pragma once

#include <stdexcept>
#include <string>

namespace stopgrid {

/// Thrown when a model parameter or configuration violates an invariant.
/// Signals misconfiguration; nothing is clamped silently.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown on numerical breakdown (no sign change when one is guaranteed,
/// singular tridiagonal solve, ...). The caller should refine and retry.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace stopgrid
