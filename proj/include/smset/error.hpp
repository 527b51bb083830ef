#pragma once

#include <stdexcept>
#include <string>

namespace smset {

enum class Errc {
    IncompatibleAmbient,
    UnknownGenerator,
    NotAHomomorphism,
    NilpotencyViolation,
    DomainError,
    DegreeError,
    UnsupportedIntegrand,
    ProbeMismatch,
    GluingObstruction,
    CoverageError,
    MalformedHorn,
    ClosureError,
    MalformedDualPlot,
    NotAPoint,
    ConstraintViolated,
    NotTangent,
    OrderBoundExceeded,
    Unsupported,
};

const char* errc_name(Errc c);

/// Every recoverable failure in the library throws this; the CLI maps it to
/// exit codes and diagnostic records.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace smset
