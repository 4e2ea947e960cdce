#include "homcert/resolution.hpp"

#include "homcert/error.hpp"

namespace homcert {

namespace {

/// Greedy lift of a basis of V / mV, where V = span(basis) is a submodule of
/// `ambient`. Candidates are taken from `basis` in order.
std::vector<Vec> minimal_generators_of(const FDModule& ambient, const std::vector<Vec>& basis)
{
    const PrimeField f = ambient.field();
    const std::size_t n = ambient.dim();
    std::vector<Vec> m_part;
    for (const auto& g : ambient.algebra().maxideal_basis()) {
        const Matrix a = ambient.action_of(g);
        for (const auto& v : basis)
            m_part.push_back(a.apply(v));
    }
    std::vector<Vec> echelon = row_space_basis(f, n, m_part);
    std::vector<Vec> gens;
    for (const auto& v : basis) {
        Vec r = v;
        reduce_modulo(f, r, echelon);
        if (is_zero(r))
            continue;
        gens.push_back(v);
        echelon.push_back(std::move(r));
        echelon = row_space_basis(f, n, echelon);
    }
    return gens;
}

/// Matrix of the free cover A^r -> ambient sending e_g to gens[g].
Matrix cover_matrix(const FDModule& ambient, const std::vector<Vec>& gens)
{
    const std::size_t da = ambient.algebra().dim();
    std::vector<Vec> cols;
    cols.reserve(gens.size() * da);
    for (const auto& g : gens)
        for (std::size_t u = 0; u < da; ++u)
            cols.push_back(ambient.action(u).apply(g));
    return Matrix::from_columns(ambient.field(), ambient.dim(), cols);
}

} // namespace

FDModule FreeResolution::term(std::size_t j) const { return free_module(algebra(), ranks.at(j)); }

bool FreeResolution::is_minimal() const
{
    const Vec pi = algebra().residue_functional();
    const PrimeField f = algebra().field();
    for (const auto& d : entries)
        for (const auto& row : d)
            for (const auto& e : row)
                if (dot(f, pi, e) != 0)
                    return false;
    return true;
}

CochainComplex FreeResolution::as_cochain_complex() const
{
    std::vector<FDModule> modules;
    std::vector<Matrix> differentials;
    for (std::size_t j = length() + 1; j-- > 0;)
        modules.push_back(term(j));
    for (std::size_t j = length(); j >= 1; --j)
        differentials.push_back(this->differentials[j - 1]);
    return CochainComplex(-static_cast<int>(length()), std::move(modules), std::move(differentials));
}

FreeResolution minimal_free_resolution(const FDModule& m, std::size_t length)
{
    const FiniteDimAlgebra& a = m.algebra();
    if (!a.is_local())
        throw Error(ErrorCode::not_local, a.locality_failure());
    if (length == 0)
        throw Error(ErrorCode::invalid_argument, "resolution length must be at least 1");
    const PrimeField f = a.field();
    const std::size_t da = a.dim();

    std::vector<Vec> standard;
    for (std::size_t c = 0; c < m.dim(); ++c)
        standard.push_back(unit_vec(m.dim(), c));
    const std::vector<Vec> gens0 = minimal_generators_of(m, standard);
    Matrix augmentation = cover_matrix(m, gens0);

    FreeResolution res{m, {gens0.size()}, {}, {}, augmentation};
    Matrix previous = augmentation;
    for (std::size_t j = 1; j <= length; ++j) {
        const FDModule p = free_module(a, res.ranks.back());
        const std::vector<Vec> kernel = previous.cols() == 0 ? std::vector<Vec>{} : kernel_basis(previous);
        const std::vector<Vec> gens = minimal_generators_of(p, row_space_basis(f, p.dim(), kernel));
        Matrix d = cover_matrix(p, gens);
        std::vector<std::vector<Vec>> entries(res.ranks.back(), std::vector<Vec>(gens.size()));
        for (std::size_t row = 0; row < res.ranks.back(); ++row)
            for (std::size_t col = 0; col < gens.size(); ++col)
                entries[row][col] = Vec(gens[col].begin() + static_cast<std::ptrdiff_t>(row * da),
                                        gens[col].begin() + static_cast<std::ptrdiff_t>((row + 1) * da));
        res.ranks.push_back(gens.size());
        res.differentials.push_back(d);
        res.entries.push_back(std::move(entries));
        previous = std::move(d);
    }
    return res;
}

InjectiveResolution dualize_to_injective_resolution(const FreeResolution& p, const FDModule& e)
{
    const FiniteDimAlgebra& a = p.algebra();
    if (!(e == injective_envelope(a)))
        throw Error(ErrorCode::not_dualizable, "module is not Hom_k(A, k) for the resolution's algebra");
    if (!is_essential_over_socle(e))
        throw Error(ErrorCode::not_dualizable, "Hom_k(A, k) has socle of dimension != 1; A is not local");
    std::vector<FDModule> modules;
    std::vector<Matrix> differentials;
    for (std::size_t j = 0; j <= p.length(); ++j)
        modules.push_back(matlis_dual(p.term(j)));
    for (std::size_t j = 1; j <= p.length(); ++j)
        differentials.push_back(p.differentials[j - 1].transpose());
    return {CochainComplex(0, std::move(modules), std::move(differentials)), p.augmentation.transpose()};
}

} // namespace homcert
