#pragma once

#include <stdexcept>
#include <string>

namespace qfc {

enum class ErrorKind {
    InvalidArgument,
    NotPositiveDefinite,
    NotPrimitive,
    Unsupported,
    PrecisionTooLow,
    WrongBranch,
    NonRationalResult,
    ResourceLimit,
    ConditionNotSatisfied,
    AssumptionViolated,
    NotLevelOne,
    NotLocallyDetermined,
    Domain,
    DegenerateDesign,
    Parse,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NotPositiveDefinite: return "not-positive-definite";
    case ErrorKind::NotPrimitive: return "not-primitive";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::PrecisionTooLow: return "precision-too-low";
    case ErrorKind::WrongBranch: return "wrong-branch";
    case ErrorKind::NonRationalResult: return "non-rational-result";
    case ErrorKind::ResourceLimit: return "resource-limit";
    case ErrorKind::ConditionNotSatisfied: return "condition-not-satisfied";
    case ErrorKind::AssumptionViolated: return "assumption-violated";
    case ErrorKind::NotLevelOne: return "not-level-one";
    case ErrorKind::NotLocallyDetermined: return "not-locally-determined";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::DegenerateDesign: return "degenerate-design-matrix";
    case ErrorKind::Parse: return "parse-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace qfc
