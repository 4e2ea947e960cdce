#include "homcert/module.hpp"

#include "homcert/error.hpp"
#include "homcert/linalg.hpp"

#include <random>
#include <string>

namespace homcert {

namespace {

Matrix linear_combination(const PrimeField& f, std::size_t rows, std::size_t cols, const std::vector<Matrix>& mats, std::span<const Scalar> coeffs)
{
    std::vector<Triplet> t;
    for (std::size_t u = 0; u < coeffs.size(); ++u) {
        if (coeffs[u] == 0)
            continue;
        const Matrix& m = mats[u];
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (const auto& e : m.row(r))
                t.push_back({r, e.col, f.mul(coeffs[u], e.value)});
    }
    return Matrix::from_triplets(f, rows, cols, std::move(t));
}

} // namespace

FDModule::FDModule(FiniteDimAlgebra algebra, std::size_t dim, std::vector<Matrix> action)
    : algebra_(std::move(algebra)), dim_(dim)
{
    const PrimeField f = algebra_.field();
    const std::size_t n = algebra_.dim();
    if (action.size() != n)
        throw Error(ErrorCode::dimension_mismatch,
                    "module has " + std::to_string(action.size()) + " action matrices, algebra has dimension " + std::to_string(n));
    for (const auto& a : action) {
        if (a.rows() != dim || a.cols() != dim)
            throw Error(ErrorCode::dimension_mismatch, "action matrix does not match module dimension");
        if (a.field() != f)
            throw Error(ErrorCode::field_mismatch, "action matrix over a different field");
    }
    if (!(linear_combination(f, dim, dim, action, algebra_.unit()) == Matrix::identity(f, dim)))
        throw Error(ErrorCode::validation_error, "unit does not act as the identity");
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            const auto uv = algebra_.multiply_basis(u, v);
            Vec coeffs(n, 0);
            for (const auto& e : uv)
                coeffs[e.col] = e.value;
            if (!(action[u] * action[v] == linear_combination(f, dim, dim, action, coeffs)))
                throw Error(ErrorCode::validation_error,
                            "action of " + algebra_.basis_label(u) + "*" + algebra_.basis_label(v) + " is not the product of the actions");
        }
    }
    action_ = std::make_shared<const std::vector<Matrix>>(std::move(action));
}

Matrix FDModule::action_of(std::span<const Scalar> element) const
{
    if (element.size() != algebra_.dim())
        throw Error(ErrorCode::dimension_mismatch, "algebra element has wrong dimension");
    return linear_combination(field(), dim_, dim_, *action_, element);
}

Vec FDModule::act(std::span<const Scalar> element, std::span<const Scalar> v) const
{
    if (element.size() != algebra_.dim() || v.size() != dim_)
        throw Error(ErrorCode::dimension_mismatch, "action argument has wrong dimension");
    const PrimeField f = field();
    Vec out(dim_, 0);
    for (std::size_t u = 0; u < element.size(); ++u)
        if (element[u] != 0)
            axpy(f, element[u], (*action_)[u].apply(v), out);
    return out;
}

bool operator==(const FDModule& a, const FDModule& b)
{
    return a.dim_ == b.dim_ && a.algebra_ == b.algebra_ && (a.action_ == b.action_ || *a.action_ == *b.action_);
}

bool is_module_map(const FDModule& source, const FDModule& target, const Matrix& m)
{
    if (!(source.algebra() == target.algebra()))
        return false;
    if (m.rows() != target.dim() || m.cols() != source.dim())
        return false;
    for (std::size_t u = 0; u < source.algebra().dim(); ++u)
        if (!(m * source.action(u) == target.action(u) * m))
            return false;
    return true;
}

ModuleMap::ModuleMap(FDModule source, FDModule target, Matrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix))
{
    if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
        throw Error(ErrorCode::dimension_mismatch, "module map matrix does not match module dimensions");
    if (!is_module_map(source_, target_, matrix_))
        throw Error(ErrorCode::validation_error, "matrix does not commute with the module action");
}

FDModule zero_module(const FiniteDimAlgebra& a)
{
    return FDModule(a, 0, std::vector<Matrix>(a.dim(), Matrix(a.field(), 0, 0)));
}

FDModule regular_module(const FiniteDimAlgebra& a)
{
    std::vector<Matrix> action;
    for (std::size_t u = 0; u < a.dim(); ++u)
        action.push_back(a.multiplication_matrix(u));
    return FDModule(a, a.dim(), std::move(action));
}

FDModule free_module(const FiniteDimAlgebra& a, std::size_t rank)
{
    if (rank == 0)
        return zero_module(a);
    std::vector<Matrix> action;
    for (std::size_t u = 0; u < a.dim(); ++u) {
        const Matrix m = a.multiplication_matrix(u);
        std::vector<Matrix> blocks(rank, m);
        action.push_back(Matrix::block_diagonal(blocks));
    }
    return FDModule(a, rank * a.dim(), std::move(action));
}

FDModule residue_module(const FiniteDimAlgebra& a)
{
    const Vec pi = a.residue_functional();
    std::vector<Matrix> action;
    for (std::size_t u = 0; u < a.dim(); ++u) {
        const std::int64_t v = pi[u];
        action.push_back(Matrix::from_dense(a.field(), 1, 1, std::span(&v, 1)));
    }
    return FDModule(a, 1, std::move(action));
}

FDModule direct_sum(std::span<const FDModule> summands)
{
    if (summands.empty())
        throw Error(ErrorCode::invalid_argument, "direct sum of no modules");
    const FiniteDimAlgebra& a = summands.front().algebra();
    std::size_t dim = 0;
    for (const auto& m : summands) {
        if (!(m.algebra() == a))
            throw Error(ErrorCode::validation_error, "direct sum of modules over different algebras");
        dim += m.dim();
    }
    std::vector<Matrix> action;
    for (std::size_t u = 0; u < a.dim(); ++u) {
        std::vector<Matrix> blocks;
        for (const auto& m : summands)
            if (m.dim() > 0)
                blocks.push_back(m.action(u));
        action.push_back(blocks.empty() ? Matrix(a.field(), 0, 0) : Matrix::block_diagonal(blocks));
    }
    return FDModule(a, dim, std::move(action));
}

FDModule matlis_dual(const FDModule& m)
{
    std::vector<Matrix> action;
    for (const auto& a : m.actions())
        action.push_back(a.transpose());
    return FDModule(m.algebra(), m.dim(), std::move(action));
}

FDModule injective_envelope(const FiniteDimAlgebra& a) { return matlis_dual(regular_module(a)); }

FDModule tensor_module(const FDModule& m, const FDModule& n)
{
    if (m.field() != n.field())
        throw Error(ErrorCode::field_mismatch, "tensor of modules over different fields");
    FiniteDimAlgebra alg = tensor_algebra(m.algebra(), n.algebra());
    const std::size_t nb = n.algebra().dim();
    std::vector<Matrix> action;
    action.reserve(alg.dim());
    for (std::size_t u = 0; u < alg.dim(); ++u)
        action.push_back(Matrix::kron(m.action(u / nb), n.action(u % nb)));
    return FDModule(std::move(alg), m.dim() * n.dim(), std::move(action));
}

Quotient quotient_module(const FDModule& m, std::span<const Vec> sub)
{
    const PrimeField f = m.field();
    const std::size_t n = m.dim();
    const std::vector<Vec> basis = row_space_basis(f, n, sub);
    std::vector<char> pivot(n, 0);
    for (const auto& b : basis)
        pivot[leading_index(b)] = 1;
    for (const auto& b : basis) {
        for (std::size_t u = 0; u < m.algebra().dim(); ++u) {
            Vec img = m.action(u).apply(b);
            reduce_modulo(f, img, basis);
            if (!is_zero(img))
                throw Error(ErrorCode::validation_error, "span is not a submodule");
        }
    }
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!pivot[c])
            free_cols.push_back(c);
    std::vector<std::size_t> position(n, 0);
    for (std::size_t i = 0; i < free_cols.size(); ++i)
        position[free_cols[i]] = i;

    std::vector<Triplet> pt, st;
    for (std::size_t c = 0; c < n; ++c) {
        Vec e = unit_vec(n, c);
        reduce_modulo(f, e, basis);
        for (std::size_t r = 0; r < n; ++r)
            if (e[r] != 0)
                pt.push_back({position[r], c, e[r]});
    }
    for (std::size_t i = 0; i < free_cols.size(); ++i)
        st.push_back({free_cols[i], i, 1});
    Matrix projection = Matrix::from_triplets(f, free_cols.size(), n, std::move(pt));
    Matrix section = Matrix::from_triplets(f, n, free_cols.size(), std::move(st));
    std::vector<Matrix> action;
    for (const auto& a : m.actions())
        action.push_back(projection * a * section);
    FDModule q(m.algebra(), free_cols.size(), std::move(action));
    return {std::move(q), std::move(projection), std::move(section)};
}

std::vector<Vec> socle(const FDModule& m)
{
    const FiniteDimAlgebra& a = m.algebra();
    if (!a.is_local())
        throw Error(ErrorCode::not_local, a.locality_failure());
    if (m.dim() == 0)
        return {};
    std::vector<Matrix> blocks;
    for (const auto& g : a.maxideal_basis())
        blocks.push_back(m.action_of(g));
    if (blocks.empty())
        return row_space_basis(m.field(), m.dim(), AffineSolutionSet::whole_space(m.field(), m.dim()).kernel_basis());
    return row_space_basis(m.field(), m.dim(), kernel_basis(Matrix::vstack(blocks)));
}

bool is_essential_over_socle(const FDModule& e) { return socle(e).size() == 1; }

std::vector<Vec> intertwiner_kernel(PrimeField f, std::size_t ds, std::size_t dt, std::span<const Matrix> as, std::span<const Matrix> bs)
{
    if (as.size() != bs.size())
        throw Error(ErrorCode::dimension_mismatch, "generator action lists differ in length");
    const std::size_t unknowns = ds * dt;
    if (unknowns == 0)
        return {};
    // X is dt x ds, unknown (i, k) at i * ds + k; one equation block X A_g = B_g X per generator.
    std::vector<Triplet> t;
    std::size_t eq_base = 0;
    for (std::size_t g = 0; g < as.size(); ++g) {
        const Matrix& a = as[g];
        const Matrix& b = bs[g];
        for (std::size_t k = 0; k < ds; ++k)
            for (const auto& e : a.row(k)) // A_{k j}
                for (std::size_t i = 0; i < dt; ++i)
                    t.push_back({eq_base + i * ds + e.col, i * ds + k, e.value});
        for (std::size_t i = 0; i < dt; ++i)
            for (const auto& e : b.row(i)) // B_{i k}
                for (std::size_t j = 0; j < ds; ++j)
                    t.push_back({eq_base + i * ds + j, e.col * ds + j, f.neg(e.value)});
        eq_base += unknowns;
    }
    if (eq_base == 0)
        return AffineSolutionSet::whole_space(f, unknowns).kernel_basis();
    return kernel_basis(Matrix::from_triplets(f, eq_base, unknowns, std::move(t)));
}

std::vector<Matrix> hom_space(const FDModule& source, const FDModule& target)
{
    if (!(source.algebra() == target.algebra()))
        throw Error(ErrorCode::validation_error, "Hom between modules over different algebras");
    std::vector<Matrix> as, bs;
    for (const auto& g : source.algebra().minimal_generators()) {
        as.push_back(source.action_of(g));
        bs.push_back(target.action_of(g));
    }
    std::vector<Matrix> out;
    for (const auto& v : intertwiner_kernel(source.field(), source.dim(), target.dim(), as, bs))
        out.push_back(Matrix::from_dense_scalars(source.field(), target.dim(), source.dim(), v));
    return out;
}

std::optional<Matrix> find_isomorphism(const FDModule& a, const FDModule& b)
{
    if (a.dim() != b.dim() || !(a.algebra() == b.algebra()))
        return std::nullopt;
    const PrimeField f = a.field();
    const std::size_t n = a.dim();
    if (n == 0)
        return Matrix(f, 0, 0);
    const std::vector<Matrix> basis = hom_space(a, b);
    if (basis.empty())
        return std::nullopt;
    auto invertible = [&](const Matrix& m) { return rank(m) == n; };
    for (const auto& m : basis)
        if (invertible(m))
            return m;
    const std::size_t h = basis.size();
    auto combine = [&](const Vec& c) {
        Matrix acc(f, n, n);
        for (std::size_t i = 0; i < h; ++i)
            if (c[i] != 0)
                acc = acc + basis[i].scaled(c[i]);
        return acc;
    };
    // exhaustive when small, otherwise a fixed-seed random search
    std::size_t total = 1;
    bool exhaustive = true;
    for (std::size_t i = 0; i < h && exhaustive; ++i) {
        if (total > 4096 / f.p())
            exhaustive = false;
        total *= f.p();
    }
    if (exhaustive) {
        Vec c(h, 0);
        for (std::size_t k = 0; k < total; ++k) {
            const Matrix m = combine(c);
            if (invertible(m))
                return m;
            for (std::size_t i = h; i-- > 0;) {
                if (++c[i] < f.p())
                    break;
                c[i] = 0;
            }
        }
        return std::nullopt;
    }
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<Scalar> dist(0, f.p() - 1);
    for (int attempt = 0; attempt < 512; ++attempt) {
        Vec c(h);
        for (auto& x : c)
            x = dist(rng);
        const Matrix m = combine(c);
        if (invertible(m))
            return m;
    }
    return std::nullopt;
}

AnnihilationProfile annihilation_profile(std::span<const Scalar> v, const RingAction& act, std::span<const AlgebraMorphism> embeddings)
{
    AnnihilationProfile out{Vec(v.begin(), v.end()), {}};
    for (std::size_t j = 0; j < embeddings.size(); ++j) {
        for (const auto& g : embeddings[j].source().maxideal_basis()) {
            if (!is_zero(act(embeddings[j].apply(g), v))) {
                out.active_factors.insert(j + 1);
                break;
            }
        }
    }
    return out;
}

AnnihilationProfile annihilation_profile(const FDModule& module, std::span<const Scalar> v, std::span<const AlgebraMorphism> embeddings)
{
    if (v.size() != module.dim())
        throw Error(ErrorCode::dimension_mismatch, "element does not belong to the module");
    for (const auto& e : embeddings)
        if (!(e.target() == module.algebra()))
            throw Error(ErrorCode::dimension_mismatch, "embedding does not land in the module's algebra");
    return annihilation_profile(
        v, [&](std::span<const Scalar> r, std::span<const Scalar> x) { return module.act(r, x); }, embeddings);
}

} // namespace homcert
