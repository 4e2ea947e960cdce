#pragma once

#include "homcert/complex.hpp"

#include <map>
#include <span>
#include <vector>

namespace homcert {

/// Degrees lo..hi of J^* = I^{(x) n} for a complex I living in degrees 0..L,
/// built without R_n-module structure.
///
/// Degree t is the sum over compositions (l_1, ..., l_n) of t with
/// 0 <= l_m <= L, ordered as the iterated product ((I (x) I) (x) I) ...
/// lists them: by l_1 + ... + l_{n-1}, then recursively by the shorter
/// prefixes. Each summand I^{l_1} (x) ... (x) I^{l_n} has its basis ordered
/// slot-1-major. Layout and signs agree with tensor_power(i, n).
class TensorPowerWindow {
public:
    /// Throws InvalidArgument unless i starts in degree 0, n >= 1 and 0 <= lo <= hi.
    TensorPowerWindow(const CochainComplex& i, std::size_t n, int lo, int hi);

    std::size_t n() const noexcept { return n_; }
    int lo() const noexcept { return lo_; }
    int hi() const noexcept { return hi_; }
    PrimeField field() const noexcept { return field_; }
    const FiniteDimAlgebra& factor_algebra() const noexcept { return factor_algebra_; }

    /// Defined for lo <= t <= hi + 1, so d^hi has a target.
    std::size_t dim(int t) const;
    const std::vector<Summand>& summands(int t) const;
    /// Throws IndexOutOfRange for an unknown multi-index.
    const Summand& summand(std::span<const int> index) const;

    /// d^t : J^t -> J^{t+1}, with sign (-1)^{l_1 + ... + l_{m-1}} on slot m.
    Matrix differential(int t) const;
    Vec apply_differential(int t, std::span<const Scalar> v) const;
    /// Upper bound on nnz(d^t).
    std::size_t differential_nnz_bound(int t) const;

    /// Phi_j(r) on J^t for r in R_1 coordinates, j in 1..n.
    Matrix factor_action(int t, std::size_t j, std::span<const Scalar> r) const;
    Vec apply_factor_action(int t, std::size_t j, std::span<const Scalar> r, std::span<const Scalar> v) const;
    /// Action of an element of R_1^{(x) n} (first factor most significant).
    Vec apply_ring_element(int t, std::span<const Scalar> element, std::span<const Scalar> v) const;

    /// v_1 (x) ... (x) v_n placed in the summand with the given index.
    Vec pure_tensor(std::span<const int> index, std::span<const Vec> factors) const;

private:
    struct Layout {
        std::vector<Summand> summands;
        std::map<std::vector<int>, std::size_t> lookup;
        std::size_t dim = 0;
    };

    const Layout& layout(int t) const;
    void check_slot(std::size_t j) const;

    PrimeField field_;
    FiniteDimAlgebra factor_algebra_;
    std::size_t n_;
    int lo_, hi_, top_;
    std::vector<std::size_t> term_dims_;             ///< dim I^l
    std::vector<Matrix> slot_differentials_;         ///< d^l : I^l -> I^{l+1}
    std::vector<std::vector<Matrix>> slot_actions_;  ///< [l][u] action of basis element u on I^l
    std::vector<std::vector<char>> slot_identity_;   ///< [l][u] action is the identity
    std::vector<Layout> layouts_;                    ///< degrees lo .. hi + 1
};

} // namespace homcert
