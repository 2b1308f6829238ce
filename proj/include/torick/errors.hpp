#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torick
{

enum class ErrorKind {
    // input / construction
    UnboundedRegion,
    EmptyInterior,
    RedundantLabel,
    InvalidPolytope,
    ParameterOutOfRange,
    ParameterOutOfDomain,
    NotAQuadrilateral,
    ZeroConstantTerm,
    OriginNotInterior,
    VertexZero,
    InvalidInput,
    // numerics
    NonPositiveWeight,
    NegativeDiscriminant,
    ToleranceNotReached,
    IllConditioned,
    NotInterior,
    SingularHessian,
    StepTooLarge,
    NoConvergence,
    DegeneratePolytope,
    ConditionANotMet,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for errors caused by bad user input rather than a numeric failure.
bool is_input_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_{kind}
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace torick
