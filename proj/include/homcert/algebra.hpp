#pragma once

#include "homcert/matrix.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace homcert {

struct StructureConstant {
    std::size_t u;
    std::size_t v;
    std::size_t w;
    std::int64_t scalar; ///< e_u * e_v contributes scalar * e_w
};

/// Witness that the designated maximal ideal m is nilpotent of codimension 1.
struct LocalityCertificate {
    std::size_t nilpotency_index = 0; ///< least N with m^N = 0
    std::size_t codimension = 0;
    std::string method;               ///< "ideal-powers" or "tensor-factors"

    friend bool operator==(const LocalityCertificate&, const LocalityCertificate&) = default;
};

namespace detail {
struct AlgebraTable;
}

/// Finite-dimensional commutative k-algebra with a designated maximal ideal.
///
/// An algebra is a tensor product of one or more explicit factors; the basis
/// is ordered left-factor-major, so index u has mixed-radix digits
/// (u_1, ..., u_r) with u_1 most significant. A single explicit algebra is a
/// tensor product with one factor. Associativity, commutativity and the unit
/// are checked when an explicit factor is built; locality is recorded and
/// reported by verify_local().
class FiniteDimAlgebra {
public:
    /// Validates unit, commutativity and associativity (exhaustive over basis
    /// pairs and triples). Throws NotUnital, NotCommutative, NotAssociative,
    /// or DimensionMismatch/IndexOutOfRange for malformed tables.
    static FiniteDimAlgebra from_structure_constants(PrimeField field, std::vector<std::string> labels,
                                                     std::span<const StructureConstant> table, Vec unit,
                                                     std::vector<Vec> maxideal_basis);

    PrimeField field() const noexcept { return field_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t factor_count() const noexcept { return factors_.size(); }
    /// The i-th tensor factor as a standalone algebra.
    FiniteDimAlgebra factor(std::size_t i) const;

    std::string basis_label(std::size_t u) const;
    std::vector<std::size_t> digits(std::size_t u) const;

    /// e_u * e_v as a sparse list of (index, coefficient).
    std::vector<Entry> multiply_basis(std::size_t u, std::size_t v) const;
    Vec multiply(std::span<const Scalar> a, std::span<const Scalar> b) const;
    /// Matrix of x -> a*x.
    Matrix multiplication_matrix(std::span<const Scalar> a) const;
    Matrix multiplication_matrix(std::size_t basis_index) const;

    Vec unit() const;
    std::vector<Vec> maxideal_basis() const;
    /// Lift of a basis of m/m^2, greedy over the reduced basis of m.
    std::vector<Vec> minimal_generators() const;
    /// The k-linear functional with kernel m taking the unit to 1. Throws NotLocal.
    Vec residue_functional() const;

    bool is_local() const noexcept;
    /// Why the algebra is not local; empty when it is.
    std::string locality_failure() const;

    /// Single-factor copy with identical structure constants and labels.
    /// Throws BudgetExceeded above `max_dim`.
    FiniteDimAlgebra flattened(std::size_t max_dim = 512) const;

    /// True when the factor lists agree (same tables in the same order).
    friend bool operator==(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b);

private:
    friend FiniteDimAlgebra tensor_algebra(const FiniteDimAlgebra&, const FiniteDimAlgebra&);
    friend LocalityCertificate verify_local(const FiniteDimAlgebra&);

    FiniteDimAlgebra(PrimeField field, std::vector<std::shared_ptr<const detail::AlgebraTable>> factors);

    PrimeField field_;
    std::vector<std::shared_ptr<const detail::AlgebraTable>> factors_;
    std::size_t dim_;
    std::vector<std::size_t> strides_;
};

/// Identical structure constants, unit and maximal ideal under the basis order.
bool same_structure(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b);

/// k[x]/(x^e), basis 1, x, ..., x^{e-1}. Throws InvalidExponent for e < 2.
FiniteDimAlgebra truncated_polynomial_algebra(PrimeField field, std::size_t exponent);
/// The field k itself (dimension 1, m = 0).
FiniteDimAlgebra ground_field_algebra(PrimeField field);
/// k[x_1..x_r]/(x_1..x_r)^2.
FiniteDimAlgebra square_zero_algebra(PrimeField field, std::size_t generators);

/// A (x) B over k. Throws FieldMismatch.
FiniteDimAlgebra tensor_algebra(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b);
FiniteDimAlgebra tensor_power(const FiniteDimAlgebra& a, std::size_t n);

/// Least N with m^N = 0 and codim(m) = 1, or throws NotLocal.
LocalityCertificate verify_local(const FiniteDimAlgebra& a);
/// Same certificate computed from ideal powers on the flattened algebra.
LocalityCertificate verify_local_by_ideal_powers(const FiniteDimAlgebra& a);

/// Unit-preserving k-algebra map given by a (target.dim x source.dim) matrix.
class AlgebraMorphism {
public:
    /// Throws ValidationError when the map fails to preserve the unit or a
    /// product of basis elements.
    AlgebraMorphism(FiniteDimAlgebra source, FiniteDimAlgebra target, Matrix matrix);

    const FiniteDimAlgebra& source() const noexcept { return source_; }
    const FiniteDimAlgebra& target() const noexcept { return target_; }
    const Matrix& matrix() const noexcept { return matrix_; }

    Vec apply(std::span<const Scalar> x) const { return matrix_.apply(x); }

    bool preserves_unit() const;
    bool preserves_multiplication() const;

    friend AlgebraMorphism compose(const AlgebraMorphism& outer, const AlgebraMorphism& inner);

private:
    FiniteDimAlgebra source_;
    FiniteDimAlgebra target_;
    Matrix matrix_;
};

/// Inclusion of R_1 as the j-th tensor factor of R_n (1 <= j <= n).
AlgebraMorphism factor_embedding(const FiniteDimAlgebra& r1, std::size_t n, std::size_t j);
/// R_n -> R_{n+1}, x -> x (x) 1.
AlgebraMorphism stage_inclusion(const FiniteDimAlgebra& r1, std::size_t n);

} // namespace homcert
