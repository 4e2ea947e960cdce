#pragma once

#include "homcert/linalg.hpp"
#include "homcert/module.hpp"

#include <climits>
#include <optional>
#include <span>
#include <vector>

namespace homcert {

/// Bounded cochain complex of modules over one algebra.
///
/// modules[k] sits in degree lo + k and differentials[k] is
/// d^{lo+k} : C^{lo+k} -> C^{lo+k+1}. Outside [lo, hi] every term is zero.
class CochainComplex {
public:
    /// Checks shapes, that each differential is a module map and d d = 0.
    /// Throws DimensionMismatch or ValidationError.
    CochainComplex(int lo, std::vector<FDModule> modules, std::vector<Matrix> differentials);

    /// The module m placed in a single degree.
    static CochainComplex concentrated(const FDModule& m, int degree);

    int lo() const noexcept { return lo_; }
    int hi() const noexcept { return lo_ + static_cast<int>(modules_.size()) - 1; }
    bool in_range(int n) const noexcept { return n >= lo() && n <= hi(); }
    const FiniteDimAlgebra& algebra() const noexcept { return modules_.front().algebra(); }
    PrimeField field() const noexcept { return algebra().field(); }

    /// Throws IndexOutOfRange outside [lo, hi].
    const FDModule& module(int n) const;
    std::size_t dim(int n) const noexcept;
    /// d^n : C^n -> C^{n+1}; a zero matrix of the right shape outside the stored range.
    Matrix differential(int n) const;

    friend bool operator==(const CochainComplex&, const CochainComplex&) = default;

private:
    int lo_;
    std::vector<FDModule> modules_;
    std::vector<Matrix> differentials_;
};

/// Block of a degree labelled by a multi-index (l_1, ..., l_n).
struct Summand {
    std::vector<int> index;
    std::size_t offset = 0;
    std::size_t dim = 0;

    friend bool operator==(const Summand&, const Summand&) = default;
};

/// A complex whose terms are direct sums indexed by multi-indices. Summands
/// of a degree are contiguous blocks listed in increasing offset.
struct MultiIndexedComplex {
    CochainComplex complex;
    std::vector<std::vector<Summand>> summands; ///< summands[n - lo]

    const std::vector<Summand>& summands_in(int n) const;
    /// Throws IndexOutOfRange when no summand carries this index.
    const Summand& summand(std::span<const int> index) const;
};

struct Cochain {
    int degree = 0;
    Vec coords;

    friend bool operator==(const Cochain&, const Cochain&) = default;
};

/// C with every summand labelled by its single degree (u).
MultiIndexedComplex with_degree_labels(const CochainComplex& c);

/// C (x) D over A (x) B. Degree t is the sum over u + v = t of C^u (x) D^v,
/// ordered by increasing u and then by the summands of C^u; multi-indices
/// concatenate. The differential is
/// d(x (x) y) = dx (x) y + (-1)^u x (x) dy. Degrees above max_degree are
/// dropped, so cohomology is only meaningful strictly below it.
/// Throws FieldMismatch.
MultiIndexedComplex tensor_complexes(const MultiIndexedComplex& c, const CochainComplex& d, int max_degree = INT_MAX);
MultiIndexedComplex tensor_complexes(const CochainComplex& c, const CochainComplex& d, int max_degree = INT_MAX);
/// C^{(x) n}, degrees capped at max_degree.
MultiIndexedComplex tensor_power(const CochainComplex& c, std::size_t n, int max_degree = INT_MAX);

struct Cohomology {
    std::size_t dim = 0;
    std::vector<Vec> representatives; ///< cycles whose classes form a basis
};

/// H^n = ker d^n / im d^{n-1}.
Cohomology cohomology(const CochainComplex& c, int n, Backend backend = Backend::automatic);
std::size_t cohomology_dim(const CochainComplex& c, int n, Backend backend = Backend::automatic);

/// tau^{>= n}: zero below n, coker(d^{n-1}) in degree n, unchanged above.
CochainComplex truncate_geq(const CochainComplex& c, int n);
/// (C[i])^m = C^{m+i}, differential multiplied by (-1)^i.
CochainComplex shift(const CochainComplex& c, int i);
/// Degreewise direct sum. Throws ValidationError for mixed algebras.
CochainComplex finite_sum(std::span<const CochainComplex> parts);
/// Finite products are computed by the same degreewise direct sum.
CochainComplex finite_product(std::span<const CochainComplex> parts);

/// {mu : d^{n-1} mu = z}, or nullopt when z is not a boundary.
/// Throws NotACycle when d^n z != 0 and DimensionMismatch for a wrong-size z.
std::optional<AffineSolutionSet> preimage_set(const CochainComplex& c, const Cochain& z, Backend backend = Backend::automatic);

} // namespace homcert
