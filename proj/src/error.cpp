#include "fhgeo/error.hpp"

namespace fhgeo {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::BadSpec: return "E_BAD_SPEC";
        case ErrorCode::Outside: return "E_OUTSIDE";
        case ErrorCode::ZeroVector: return "E_ZERO_VECTOR";
        case ErrorCode::NoConverge: return "E_NO_CONVERGE";
        case ErrorCode::TangentRay: return "E_TANGENT_RAY";
        case ErrorCode::NearBoundary: return "E_NEAR_BOUNDARY";
        case ErrorCode::NotSpd: return "E_NOT_SPD";
        case ErrorCode::Tolerance: return "E_TOLERANCE";
        case ErrorCode::BadN: return "E_BAD_N";
        case ErrorCode::BadK: return "E_BAD_K";
        case ErrorCode::UnitSpeed: return "E_UNIT_SPEED";
    }
    return "E_UNKNOWN";
}

} // namespace fhgeo
