#pragma once

#include "homcert/algebra.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace homcert {

/// Finite-dimensional module over a FiniteDimAlgebra, given by one action
/// matrix per algebra basis element (acting on column vectors).
class FDModule {
public:
    /// Checks that the unit acts as the identity and that
    /// action(u) action(v) = sum_w c_uv^w action(w) for every basis pair.
    /// Throws ValidationError otherwise.
    FDModule(FiniteDimAlgebra algebra, std::size_t dim, std::vector<Matrix> action);

    const FiniteDimAlgebra& algebra() const noexcept { return algebra_; }
    PrimeField field() const noexcept { return algebra_.field(); }
    std::size_t dim() const noexcept { return dim_; }
    const Matrix& action(std::size_t basis_index) const { return (*action_)[basis_index]; }
    const std::vector<Matrix>& actions() const noexcept { return *action_; }

    /// Matrix by which an arbitrary algebra element acts.
    Matrix action_of(std::span<const Scalar> element) const;
    Vec act(std::span<const Scalar> element, std::span<const Scalar> v) const;

    friend bool operator==(const FDModule& a, const FDModule& b);

private:
    FiniteDimAlgebra algebra_;
    std::size_t dim_;
    std::shared_ptr<const std::vector<Matrix>> action_;
};

/// A-linear map, matrix of size target.dim x source.dim.
class ModuleMap {
public:
    /// Throws ValidationError if the matrix fails to commute with the action.
    ModuleMap(FDModule source, FDModule target, Matrix matrix);

    const FDModule& source() const noexcept { return source_; }
    const FDModule& target() const noexcept { return target_; }
    const Matrix& matrix() const noexcept { return matrix_; }
    Vec apply(std::span<const Scalar> v) const { return matrix_.apply(v); }

private:
    FDModule source_;
    FDModule target_;
    Matrix matrix_;
};

/// True when m intertwines the actions of every algebra basis element.
bool is_module_map(const FDModule& source, const FDModule& target, const Matrix& m);

FDModule zero_module(const FiniteDimAlgebra& a);
FDModule regular_module(const FiniteDimAlgebra& a);
/// A^rank, basis ordered generator-major: index g * dim(A) + u.
FDModule free_module(const FiniteDimAlgebra& a, std::size_t rank);
/// k = A/m. Throws NotLocal.
FDModule residue_module(const FiniteDimAlgebra& a);
FDModule direct_sum(std::span<const FDModule> summands);

/// Hom_k(M, k) with (a.f)(x) = f(a.x); the action matrices are transposed.
FDModule matlis_dual(const FDModule& m);
/// Hom_k(A, k), the injective envelope of k over a local algebra.
FDModule injective_envelope(const FiniteDimAlgebra& a);

/// M (x) N over A (x) B, actions are Kronecker products. Throws FieldMismatch.
FDModule tensor_module(const FDModule& m, const FDModule& n);

struct Quotient {
    FDModule module;
    Matrix projection; ///< quotient.dim x source.dim
    Matrix section;    ///< source.dim x quotient.dim, standard lift of the quotient basis
};

/// M / span(sub). Quotient coordinates are the non-pivot columns of the
/// reduced echelon basis of the submodule. Throws ValidationError if span(sub)
/// is not a submodule.
Quotient quotient_module(const FDModule& m, std::span<const Vec> sub);

/// Reduced echelon basis of {v : g v = 0 for every g in m}. Throws NotLocal.
std::vector<Vec> socle(const FDModule& m);
/// Over a local algebra every nonzero submodule meets the socle, so a module
/// is an essential extension of k iff its socle is one-dimensional.
bool is_essential_over_socle(const FDModule& e);

/// Basis of Hom_A(source, target) as target.dim x source.dim matrices.
std::vector<Matrix> hom_space(const FDModule& source, const FDModule& target);
/// Kernel of X -> (X A_g - B_g X)_g, with X vectorized row-major. The
/// matrices a[g] (source) and b[g] (target) are the actions of a generating
/// set of the algebra.
std::vector<Vec> intertwiner_kernel(PrimeField field, std::size_t source_dim, std::size_t target_dim,
                                    std::span<const Matrix> a, std::span<const Matrix> b);
/// An invertible element of Hom_A(a, b), if one is found.
std::optional<Matrix> find_isomorphism(const FDModule& a, const FDModule& b);

/// Which tensor factors fail to annihilate an element.
struct AnnihilationProfile {
    Vec element;
    std::set<std::size_t> active_factors; ///< j such that some generator of Phi_j(m) acts nonzero

    friend bool operator==(const AnnihilationProfile&, const AnnihilationProfile&) = default;
};

/// Action of an element of R_n (given in R_n coordinates) on a vector.
using RingAction = std::function<Vec(std::span<const Scalar> ring_element, std::span<const Scalar> v)>;

/// embeddings[j-1] is Phi_j : R_1 -> R_n. The maximal ideal basis of R_1 is
/// pushed through each embedding and applied to v.
AnnihilationProfile annihilation_profile(std::span<const Scalar> v, const RingAction& act, std::span<const AlgebraMorphism> embeddings);
AnnihilationProfile annihilation_profile(const FDModule& module, std::span<const Scalar> v, std::span<const AlgebraMorphism> embeddings);

} // namespace homcert
