#pragma once

#include <stdexcept>
#include <string>

namespace ibt {

// Base for all library errors. `code()` is a stable machine-readable tag
// that the CLI maps to exit codes and JSON error objects.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct InputError : Error {
    InputError(std::string code, const std::string& what) : Error(std::move(code), what) {}
};

struct NoConwayPolynomial : InputError {
    explicit NoConwayPolynomial(const std::string& what) : InputError("NoConwayPolynomial", what) {}
};

struct PrecisionTooSmall : InputError {
    explicit PrecisionTooSmall(const std::string& what) : InputError("PrecisionTooSmall", what) {}
};

struct IncompatibleTower : InputError {
    explicit IncompatibleTower(const std::string& what) : InputError("IncompatibleTower", what) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& what) : Error("DivisionByZero", what) {}
};

// Raised when a result's unit part (or a pivot, or a polygon vertex) cannot
// be certified at the working precision. Loud by design.
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& what) : Error("PrecisionExhausted", what) {}
};

struct SlopeNotIntegral : InputError {
    explicit SlopeNotIntegral(const std::string& what) : InputError("SlopeNotIntegral", what) {}
};

struct InvalidMultiplicity : InputError {
    explicit InvalidMultiplicity(const std::string& what) : InputError("InvalidMultiplicity", what) {}
};

struct DenominatorCapExceeded : InputError {
    explicit DenominatorCapExceeded(const std::string& what) : InputError("DenominatorCapExceeded", what) {}
};

struct DecompositionUnverified : Error {
    explicit DecompositionUnverified(const std::string& what) : Error("DecompositionUnverified", what) {}
};

struct InvalidParams : InputError {
    explicit InvalidParams(const std::string& what) : InputError("InvalidParams", what) {}
};

struct EmptySample : InputError {
    explicit EmptySample(const std::string& what) : InputError("EmptySample", what) {}
};

struct NotInJ : Error {
    explicit NotInJ(const std::string& what) : Error("NotInJ", what) {}
};

struct NotInMin : Error {
    explicit NotInMin(const std::string& what) : Error("NotInMin", what) {}
};

struct ScaleTooLarge : InputError {
    explicit ScaleTooLarge(const std::string& what) : InputError("ScaleTooLarge", what) {}
};

struct SlopeRange : InputError {
    explicit SlopeRange(const std::string& what) : InputError("SlopeRange", what) {}
};

struct UnknownSuite : InputError {
    explicit UnknownSuite(const std::string& what) : InputError("UnknownSuite", what) {}
};

} // namespace ibt
