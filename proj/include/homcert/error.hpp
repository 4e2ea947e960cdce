#pragma once

#include <stdexcept>
#include <string>

namespace homcert {

enum class ErrorCode {
    dimension_mismatch,
    invalid_exponent,
    parse_error,
    validation_error,
    not_associative,
    not_commutative,
    not_unital,
    not_local,
    field_mismatch,
    index_out_of_range,
    budget_exceeded,
    not_dualizable,
    not_a_cycle,
    not_a_boundary,
    resolution_invalid,
    socle_empty,
    projective_residue,
    resource_budget_exceeded,
    incomplete_stages,
    invalid_argument,
};

/// Diagnostic name of an error code, e.g. "NotLocal".
const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace homcert
