#include "smset/error.hpp"

namespace smset {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::IncompatibleAmbient: return "incompatible-ambient";
        case Errc::UnknownGenerator: return "unknown-generator";
        case Errc::NotAHomomorphism: return "not-a-homomorphism";
        case Errc::NilpotencyViolation: return "nilpotency-violation";
        case Errc::DomainError: return "domain-error";
        case Errc::DegreeError: return "degree-error";
        case Errc::UnsupportedIntegrand: return "unsupported-integrand";
        case Errc::ProbeMismatch: return "probe-mismatch";
        case Errc::GluingObstruction: return "gluing-obstruction";
        case Errc::CoverageError: return "coverage-error";
        case Errc::MalformedHorn: return "malformed-horn";
        case Errc::ClosureError: return "closure-error";
        case Errc::MalformedDualPlot: return "malformed-dual-plot";
        case Errc::NotAPoint: return "not-a-point";
        case Errc::ConstraintViolated: return "constraint-violated";
        case Errc::NotTangent: return "not-tangent";
        case Errc::OrderBoundExceeded: return "order-bound-exceeded";
        case Errc::Unsupported: return "unsupported";
    }
    return "error";
}

} // namespace smset
