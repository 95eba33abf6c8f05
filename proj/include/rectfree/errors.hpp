#pragma once

#include <stdexcept>
#include <string>

namespace rectfree {

/// Argument outside the set where a transform is defined (poles, out-of-range θ, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed input: bad weights, empty sequences, series with the wrong constant term.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative method failed to converge or a decomposition failed.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rectfree
