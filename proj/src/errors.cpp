#include "torick/errors.hpp"

namespace torick
{

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
        case ErrorKind::UnboundedRegion: return "UnboundedRegion";
        case ErrorKind::EmptyInterior: return "EmptyInterior";
        case ErrorKind::RedundantLabel: return "RedundantLabel";
        case ErrorKind::InvalidPolytope: return "InvalidPolytope";
        case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorKind::ParameterOutOfDomain: return "ParameterOutOfDomain";
        case ErrorKind::NotAQuadrilateral: return "NotAQuadrilateral";
        case ErrorKind::ZeroConstantTerm: return "ZeroConstantTerm";
        case ErrorKind::OriginNotInterior: return "OriginNotInterior";
        case ErrorKind::VertexZero: return "VertexZero";
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorKind::NegativeDiscriminant: return "NegativeDiscriminant";
        case ErrorKind::ToleranceNotReached: return "ToleranceNotReached";
        case ErrorKind::IllConditioned: return "IllConditioned";
        case ErrorKind::NotInterior: return "NotInterior";
        case ErrorKind::SingularHessian: return "SingularHessian";
        case ErrorKind::StepTooLarge: return "StepTooLarge";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DegeneratePolytope: return "DegeneratePolytope";
        case ErrorKind::ConditionANotMet: return "ConditionANotMet";
    }
    return "Unknown";
}

bool is_input_error(ErrorKind kind) noexcept
{
    switch (kind) {
        case ErrorKind::UnboundedRegion:
        case ErrorKind::EmptyInterior:
        case ErrorKind::RedundantLabel:
        case ErrorKind::InvalidPolytope:
        case ErrorKind::ParameterOutOfRange:
        case ErrorKind::ParameterOutOfDomain:
        case ErrorKind::NotAQuadrilateral:
        case ErrorKind::ZeroConstantTerm:
        case ErrorKind::OriginNotInterior:
        case ErrorKind::VertexZero:
        case ErrorKind::InvalidInput:
        case ErrorKind::NegativeDiscriminant:
            return true;
        default:
            return false;
    }
}

}  // namespace torick
