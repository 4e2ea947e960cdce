#pragma once

#include "homcert/matrix.hpp"

#include <span>
#include <string>
#include <string_view>

namespace homcert {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

/// Digest of a canonical little-endian encoding (p, shape, CSR arrays), so
/// equal matrices hash equally on every platform.
std::string hash_matrix(const Matrix& m);
std::string hash_vector(const PrimeField& f, std::span<const Scalar> v);

} // namespace homcert
