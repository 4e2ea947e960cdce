#pragma once

#include "homcert/matrix.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace homcert {

enum class Backend { automatic, dense, sparse };

/// Order in which the dense backend discovers pivots. Both orders produce the
/// same reduced row echelon form; they exist so one can cross-check the other.
enum class EliminationOrder {
    column_sweep,  ///< scan columns left to right, take the lowest row with a nonzero
    row_insertion, ///< feed rows top to bottom into an incrementally reduced basis
};

/// `automatic` selects the sparse backend once either dimension exceeds this.
inline constexpr std::size_t dense_threshold = 512;

Backend resolve_backend(Backend requested, std::size_t rows, std::size_t cols) noexcept;

struct Rref {
    Matrix reduced;                  ///< same shape as the input, zero rows last
    std::size_t rank = 0;
    std::vector<std::size_t> pivots; ///< pivot column of each nonzero row
};

Rref rref_rank(const Matrix& m, Backend backend = Backend::automatic, EliminationOrder order = EliminationOrder::column_sweep);
std::size_t rank(const Matrix& m, Backend backend = Backend::automatic);

/// particular + span(kernel_basis).
class AffineSolutionSet {
public:
    AffineSolutionSet(PrimeField field, Vec particular, std::vector<Vec> kernel_basis);

    static AffineSolutionSet whole_space(PrimeField field, std::size_t dim);

    PrimeField field() const noexcept { return field_; }
    const Vec& particular() const noexcept { return particular_; }
    const std::vector<Vec>& kernel_basis() const noexcept { return kernel_basis_; }
    std::size_t ambient_dim() const noexcept { return particular_.size(); }
    std::size_t dimension() const noexcept { return kernel_basis_.size(); }

    bool contains(std::span<const Scalar> x) const;
    /// p^dimension, saturating at SIZE_MAX.
    std::size_t cardinality() const noexcept;
    /// All members, in lexicographic order of their kernel coefficients.
    /// Throws Error(budget_exceeded) when the set has more than `limit` members.
    std::vector<Vec> enumerate(std::size_t limit) const;
    /// Kernel basis in reduced row echelon form, particular reduced against it.
    /// Two sets are equal iff their canonical forms are identical.
    AffineSolutionSet canonical() const;
    bool same_set(const AffineSolutionSet& other) const;

    friend bool operator==(const AffineSolutionSet&, const AffineSolutionSet&) = default;

private:
    PrimeField field_;
    Vec particular_;
    std::vector<Vec> kernel_basis_;
};

/// {x : a x = b}, or nullopt when b is not in the image of a.
///
/// The particular solution vanishes on every free coordinate of the reduced
/// form of a; kernel vector k_f has a 1 at free column f and zeros at the
/// other free columns.
std::optional<AffineSolutionSet> solve_affine(const Matrix& a, std::span<const Scalar> b, Backend backend = Backend::automatic);

std::vector<Vec> kernel_basis(const Matrix& a, Backend backend = Backend::automatic);

/// {x in s : b x = 0}, canonical form, or nullopt when empty.
std::optional<AffineSolutionSet> intersect_affine_with_kernel(const AffineSolutionSet& s, const Matrix& b, Backend backend = Backend::automatic);

/// Reduced row echelon basis of span(vectors).
std::vector<Vec> row_space_basis(PrimeField field, std::size_t dim, std::span<const Vec> vectors);

/// Index of the first nonzero coordinate, or v.size() for the zero vector.
std::size_t leading_index(std::span<const Scalar> v) noexcept;

/// Replace v by its normal form modulo span(echelon), which must be a
/// reduced row echelon basis: the result vanishes on every pivot column.
void reduce_modulo(const PrimeField& field, Vec& v, std::span<const Vec> echelon);

/// The rows and columns of `a` lying in connected components of its
/// row/column incidence graph that meet supp(rhs), together with the
/// restricted system. a x = rhs is solvable iff the restricted system is,
/// because every other component carries a homogeneous system.
struct LocalizedSystem {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    Matrix matrix;
    Vec rhs;
};

LocalizedSystem localize(const Matrix& a, std::span<const Scalar> rhs);

/// rank(a) computed as the sum of ranks of its connected blocks.
std::size_t block_rank(const Matrix& a);

/// Column partition of `a` into connected blocks (each sorted, ordered by first column).
std::vector<std::vector<std::size_t>> column_blocks(const Matrix& a);

} // namespace homcert
