#pragma once

#include "homcert/module.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace homcert {

struct BaerBudget {
    std::size_t max_ring_elements = std::size_t{1} << 16;
    std::size_t max_ideals = 1'000'000;
};

/// An ideal together with a module map I -> e that does not extend to A.
struct BaerWitness {
    std::vector<Vec> ideal_basis; ///< reduced echelon basis in algebra coordinates
    Matrix map;                   ///< e.dim x ideal dim, columns are images of ideal_basis
};

struct BaerReport {
    bool injective = false;
    std::size_t ideals_checked = 0;
    std::optional<BaerWitness> witness;
};

/// Every ideal of a local algebra, as reduced echelon bases, in discovery
/// order (starting with 0). Throws BudgetExceeded beyond `max_ideals`.
std::vector<std::vector<Vec>> enumerate_ideals(const FiniteDimAlgebra& a, std::size_t max_ideals);

/// Baer's criterion: e is injective iff for every ideal I the restriction
/// Hom_A(A, e) -> Hom_A(I, e) is onto. The restriction has image of
/// dimension dim e - dim ann_e(I), so each ideal costs one Hom-space
/// computation. Throws BudgetExceeded when |A| exceeds the budget or the
/// ideal lattice is too large, NotLocal for non-local algebras.
BaerReport baer_injectivity_test(const FDModule& e, const FiniteDimAlgebra& a, const BaerBudget& budget = {});

} // namespace homcert
