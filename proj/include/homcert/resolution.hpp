#pragma once

#include "homcert/complex.hpp"

#include <vector>

namespace homcert {

/// P_L -> ... -> P_1 -> P_0 -> M with P_j = A^{rank_j}.
///
/// Free module coordinates are generator-major (g * dim A + u). The
/// differential d_j : P_j -> P_{j-1} is stored both as a k-linear matrix and
/// as a rank_{j-1} x rank_j matrix with entries in A.
struct FreeResolution {
    FDModule module;
    std::vector<std::size_t> ranks;                    ///< rank of P_0 .. P_L
    std::vector<Matrix> differentials;                 ///< differentials[j-1] = d_j, k-linear
    std::vector<std::vector<std::vector<Vec>>> entries; ///< entries[j-1][row][col] in A
    Matrix augmentation;                               ///< P_0 -> M, module.dim x dim P_0

    std::size_t length() const noexcept { return differentials.size(); }
    const FiniteDimAlgebra& algebra() const noexcept { return module.algebra(); }
    FDModule term(std::size_t j) const;
    /// Every differential entry lies in m, i.e. has zero residue.
    bool is_minimal() const;
    /// P_* as a cochain complex in degrees -L .. 0 (P_j in degree -j).
    CochainComplex as_cochain_complex() const;
};

/// Cover by the free module on a lift of a basis of M/mM, take the kernel,
/// repeat. Lifts are chosen greedily in basis order. Throws NotLocal and
/// InvalidArgument for length 0.
FreeResolution minimal_free_resolution(const FDModule& m, std::size_t length);

struct InjectiveResolution {
    CochainComplex complex; ///< I^j = Hom_A(P_j, E) in degree j
    Matrix coaugmentation;  ///< M^* -> I^0, the transpose of the augmentation
};

/// Hom_A(-, E) applied to P_*. With E = Hom_k(A, k), Hom_A(A^r, E) is
/// Hom_k(A^r, k), so I^j is the k-dual of P_j and d^j is the transpose of
/// d_{j+1}. Throws NotDualizable unless e is the dual of the regular module
/// with one-dimensional socle.
InjectiveResolution dualize_to_injective_resolution(const FreeResolution& p, const FDModule& e);

} // namespace homcert
