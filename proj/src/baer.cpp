#include "homcert/baer.hpp"

#include "homcert/error.hpp"
#include "homcert/linalg.hpp"

#include <deque>
#include <string>
#include <unordered_set>

namespace homcert {

namespace {

std::string ideal_key(const std::vector<Vec>& basis)
{
    std::string key;
    for (const auto& v : basis) {
        key.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(Scalar));
        key.push_back('|');
    }
    return key;
}

std::vector<std::size_t> pivot_columns(const std::vector<Vec>& echelon)
{
    std::vector<std::size_t> out;
    for (const auto& v : echelon)
        out.push_back(leading_index(v));
    return out;
}

/// Coordinates of v in the reduced echelon basis (v must lie in its span).
Vec echelon_coordinates(const std::vector<std::size_t>& pivots, std::span<const Scalar> v)
{
    Vec c(pivots.size());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        c[i] = v[pivots[i]];
    return c;
}

std::size_t ring_cardinality(const FiniteDimAlgebra& a, std::size_t cap)
{
    std::size_t n = 1;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (n > cap / a.field().p())
            return cap + 1;
        n *= a.field().p();
    }
    return n;
}

} // namespace

std::vector<std::vector<Vec>> enumerate_ideals(const FiniteDimAlgebra& a, std::size_t max_ideals)
{
    if (!a.is_local())
        throw Error(ErrorCode::not_local, a.locality_failure());
    const PrimeField f = a.field();
    const std::size_t n = a.dim();
    std::vector<Matrix> gens;
    for (const auto& g : a.minimal_generators())
        gens.push_back(a.multiplication_matrix(g));

    std::vector<std::vector<Vec>> out;
    std::unordered_set<std::string> seen;
    std::deque<std::size_t> queue;
    out.push_back({});
    seen.insert(ideal_key(out.back()));
    queue.push_back(0);

    while (!queue.empty()) {
        const std::vector<Vec> ideal = out[queue.front()];
        queue.pop_front();
        std::vector<char> pivot(n, 0);
        for (auto c : pivot_columns(ideal))
            pivot[c] = 1;
        std::vector<std::size_t> free_cols;
        for (std::size_t c = 0; c < n; ++c)
            if (!pivot[c])
                free_cols.push_back(c);
        if (free_cols.empty())
            continue;
        // (J : m) / J as the kernel of v -> (g v mod J)_g on representatives supported off the pivots.
        std::vector<Triplet> t;
        for (std::size_t k = 0; k < free_cols.size(); ++k) {
            const Vec v = unit_vec(n, free_cols[k]);
            for (std::size_t g = 0; g < gens.size(); ++g) {
                Vec w = gens[g].apply(v);
                reduce_modulo(f, w, ideal);
                for (std::size_t r = 0; r < free_cols.size(); ++r)
                    if (w[free_cols[r]] != 0)
                        t.push_back({g * free_cols.size() + r, k, w[free_cols[r]]});
            }
        }
        std::vector<Vec> socle_basis;
        if (gens.empty())
            socle_basis = AffineSolutionSet::whole_space(f, free_cols.size()).kernel_basis();
        else
            socle_basis = kernel_basis(Matrix::from_triplets(f, gens.size() * free_cols.size(), free_cols.size(), std::move(t)));
        // one extension per line in the socle of A/J: coefficient vectors with leading entry 1
        const std::size_t d = socle_basis.size();
        Vec coeff(d, 0);
        for (std::size_t lead = 0; lead < d; ++lead) {
            std::fill(coeff.begin(), coeff.end(), 0);
            coeff[lead] = 1;
            while (true) {
                Vec v(n, 0);
                for (std::size_t k = 0; k < d; ++k)
                    if (coeff[k] != 0)
                        for (std::size_t r = 0; r < free_cols.size(); ++r)
                            if (socle_basis[k][r] != 0)
                                v[free_cols[r]] = f.add(v[free_cols[r]], f.mul(coeff[k], socle_basis[k][r]));
                std::vector<Vec> gensets = ideal;
                gensets.push_back(std::move(v));
                std::vector<Vec> bigger = row_space_basis(f, n, gensets);
                if (seen.insert(ideal_key(bigger)).second) {
                    if (out.size() >= max_ideals)
                        throw Error(ErrorCode::budget_exceeded,
                                    "more than " + std::to_string(max_ideals) + " ideals");
                    out.push_back(std::move(bigger));
                    queue.push_back(out.size() - 1);
                }
                std::size_t k = d;
                while (k-- > lead + 1) {
                    if (++coeff[k] < f.p())
                        break;
                    coeff[k] = 0;
                }
                if (k == lead)
                    break;
            }
        }
    }
    return out;
}

BaerReport baer_injectivity_test(const FDModule& e, const FiniteDimAlgebra& a, const BaerBudget& budget)
{
    if (!(e.algebra() == a))
        throw Error(ErrorCode::validation_error, "module is not over the given algebra");
    if (!a.is_local())
        throw Error(ErrorCode::not_local, a.locality_failure());
    if (ring_cardinality(a, budget.max_ring_elements) > budget.max_ring_elements)
        throw Error(ErrorCode::budget_exceeded,
                    "ring has more than " + std::to_string(budget.max_ring_elements) + " elements");
    const PrimeField f = a.field();
    const std::vector<Vec> gen_vectors = a.minimal_generators();
    std::vector<Matrix> regular_gens, module_gens;
    for (const auto& g : gen_vectors) {
        regular_gens.push_back(a.multiplication_matrix(g));
        module_gens.push_back(e.action_of(g));
    }

    BaerReport report;
    for (const auto& ideal : enumerate_ideals(a, budget.max_ideals)) {
        ++report.ideals_checked;
        const std::size_t d = ideal.size();
        if (d == 0 || e.dim() == 0)
            continue;
        const std::vector<std::size_t> pivots = pivot_columns(ideal);
        std::vector<Matrix> ideal_gens;
        for (const auto& l : regular_gens) {
            std::vector<Vec> cols;
            for (const auto& b : ideal)
                cols.push_back(echelon_coordinates(pivots, l.apply(b)));
            ideal_gens.push_back(Matrix::from_columns(f, d, cols));
        }
        const std::vector<Vec> homs = intertwiner_kernel(f, d, e.dim(), ideal_gens, module_gens);

        std::vector<Matrix> ideal_actions;
        for (const auto& b : ideal)
            ideal_actions.push_back(e.action_of(b));
        const Matrix stacked = Matrix::vstack(ideal_actions);
        const std::size_t restricted = rank(stacked); // dim e - dim ann_e(I)
        if (homs.size() == restricted)
            continue;

        // Some Hom_A(I, e) element lies outside the span of the restrictions r -> r u.
        std::vector<Vec> restrictions;
        for (std::size_t u = 0; u < e.dim(); ++u) {
            const Vec eu = unit_vec(e.dim(), u);
            Vec flat(e.dim() * d, 0);
            for (std::size_t j = 0; j < d; ++j) {
                const Vec img = ideal_actions[j].apply(eu);
                for (std::size_t i = 0; i < e.dim(); ++i)
                    flat[i * d + j] = img[i];
            }
            restrictions.push_back(std::move(flat));
        }
        const std::vector<Vec> span = row_space_basis(f, e.dim() * d, restrictions);
        for (const auto& h : homs) {
            Vec r = h;
            reduce_modulo(f, r, span);
            if (!is_zero(r)) {
                report.witness = BaerWitness{ideal, Matrix::from_dense_scalars(f, e.dim(), d, h)};
                break;
            }
        }
        report.injective = false;
        return report;
    }
    report.injective = true;
    return report;
}

} // namespace homcert
