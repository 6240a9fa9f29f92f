#pragma once

#include <stdexcept>
#include <string>

namespace moebius {

/// Input outside the mathematical domain of an operation (non-finite values,
/// angles outside [0, 2pi), an infinite half-width where a finite one is needed).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Evaluation at the removed point (-1, 0) of the rational graph functions.
class SingularPointError : public DomainError {
public:
    explicit SingularPointError(const std::string& what) : DomainError(what) {}
};

/// Invalid sizes or flags passed by a caller (grid dimensions, weld parity).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition on the geometry does not hold.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace moebius
