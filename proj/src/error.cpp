#include "homcert/error.hpp"

namespace homcert {

const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::invalid_exponent: return "InvalidExponent";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::validation_error: return "ValidationError";
    case ErrorCode::not_associative: return "NotAssociative";
    case ErrorCode::not_commutative: return "NotCommutative";
    case ErrorCode::not_unital: return "NotUnital";
    case ErrorCode::not_local: return "NotLocal";
    case ErrorCode::field_mismatch: return "FieldMismatch";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::not_dualizable: return "NotDualizable";
    case ErrorCode::not_a_cycle: return "NotACycle";
    case ErrorCode::not_a_boundary: return "NotABoundary";
    case ErrorCode::resolution_invalid: return "ResolutionInvalid";
    case ErrorCode::socle_empty: return "SocleEmpty";
    case ErrorCode::projective_residue: return "ProjectiveResidue";
    case ErrorCode::resource_budget_exceeded: return "ResourceBudgetExceeded";
    case ErrorCode::incomplete_stages: return "IncompleteStages";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

} // namespace homcert
