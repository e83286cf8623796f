#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pwp {

// Base error. `kind()` is a stable machine-readable tag used by the CLI
// for structured diagnostics and exit-code mapping.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Problems with inputs (bad data, bad arguments). CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
    explicit ValidationError(const std::string& message)
        : Error("ValidationError", message) {}
};

// Numerical failures during computation. CLI exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
    explicit NumericError(const std::string& message)
        : Error("NumericError", message) {}
};

#define PWP_DEFINE_ERROR(NAME, BASE)                          \
    class NAME : public BASE {                                \
    public:                                                   \
        explicit NAME(const std::string& message)             \
            : BASE(#NAME, message) {}                         \
    }

PWP_DEFINE_ERROR(DuplicateId, ValidationError);
PWP_DEFINE_ERROR(DanglingEndpoint, ValidationError);
PWP_DEFINE_ERROR(InvalidMap, ValidationError);
PWP_DEFINE_ERROR(DimensionMismatch, ValidationError);
PWP_DEFINE_ERROR(ProbabilityOutOfRange, ValidationError);
PWP_DEFINE_ERROR(RangeError, ValidationError);
PWP_DEFINE_ERROR(NegativeWeights, ValidationError);
PWP_DEFINE_ERROR(ParseError, ValidationError);

PWP_DEFINE_ERROR(NonFiniteInput, NumericError);
PWP_DEFINE_ERROR(OracleBudgetExceeded, NumericError);
PWP_DEFINE_ERROR(ZeroTotalWeight, NumericError);
PWP_DEFINE_ERROR(ZeroTotalInfluence, NumericError);

#undef PWP_DEFINE_ERROR

}  // namespace pwp
