#pragma once

#include <stdexcept>
#include <string>

namespace fhgeo {

enum class ErrorCode {
    BadSpec,       // malformed or inconsistent domain specification
    Outside,       // query point not interior to the domain
    ZeroVector,    // direction below the zero-vector threshold
    NoConverge,    // root solver hit its iteration cap
    TangentRay,    // chord grazes the boundary, implicit jets undefined
    NearBoundary,  // query too close to the boundary for finite differences
    NotSpd,        // metric matrix failed the positive-definite check
    Tolerance,     // Richardson error estimate above the requested tolerance
    BadN,          // effective-dimension parameter below the manifold dimension
    BadK,          // curvature bound outside the supported regime
    UnitSpeed,     // unit-speed precondition violated
};

const char* error_code_name(ErrorCode code);

class GeometryError : public std::runtime_error {
public:
    GeometryError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

    /// Input-validation errors (bad spec / bad parameters), as opposed to
    /// geometric failures discovered during computation.
    bool is_usage_error() const {
        return code_ == ErrorCode::BadSpec || code_ == ErrorCode::BadN || code_ == ErrorCode::BadK;
    }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw GeometryError(code, what);
}

} // namespace fhgeo
