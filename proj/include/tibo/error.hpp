#pragma once

#include <stdexcept>
#include <string>

namespace tibo {

/// Raised when caller-supplied data violates a documented precondition
/// (grid integrality, sample symmetry, singular boundary system, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an evaluation produces a non-finite value.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, long index)
        : std::runtime_error(what + " (index " + std::to_string(index) + ")"), index_(index) {}

    long index() const noexcept { return index_; }

private:
    long index_;
};

}  // namespace tibo
