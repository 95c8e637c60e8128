#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clbp {

enum class Errc {
    EmptySequence,
    WeightBelowOne,
    InvalidParam,
    TargetTooSmall,
    InvalidRange,
    EmptyBand,
    MuTooSmall,
    DivergentRecursion,
    SelfLoop,
    IndexOutOfRange,
    EmptyNucleusBand,
    NotSubcritical,
    NoHeavyVertices,
    GuardViolated,
    Parse,
    Io,
};

std::string_view to_string(Errc code) noexcept;

/// Every recoverable failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised by layer_plan when the recursion stops decreasing. The witness is the
/// first point at which the supercritical tail condition fails.
class DivergentRecursionError : public Error {
public:
    DivergentRecursionError(const std::string& what, double witness)
        : Error(Errc::DivergentRecursion, what), witness_(witness) {}

    double witness() const noexcept { return witness_; }

private:
    double witness_;
};

}  // namespace clbp
