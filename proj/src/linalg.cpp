#include "homcert/linalg.hpp"

#include "homcert/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace homcert {

Backend resolve_backend(Backend requested, std::size_t rows, std::size_t cols) noexcept
{
    if (requested != Backend::automatic)
        return requested;
    return std::max(rows, cols) > dense_threshold ? Backend::sparse : Backend::dense;
}

namespace {

using SparseRow = std::vector<Entry>;

// ---------------------------------------------------------------- dense ---

class DenseRows {
public:
    DenseRows(const Matrix& m) : rows_(m.rows()), cols_(m.cols()), a_(m.to_dense()) {}

    Scalar* row(std::size_t r) { return a_.data() + r * cols_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Scalar> a_;
};

void dense_eliminate_row(const PrimeField& f, Scalar* target, const Scalar* pivot_row, std::size_t from, std::size_t cols, Scalar factor)
{
    for (std::size_t c = from; c < cols; ++c)
        if (pivot_row[c] != 0)
            target[c] = f.sub_mul(target[c], factor, pivot_row[c]);
}

Rref dense_column_sweep(const Matrix& m)
{
    const PrimeField f = m.field();
    DenseRows a(m);
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rows;
        for (std::size_t r = rank; r < rows; ++r)
            if (a.row(r)[c] != 0) {
                piv = r;
                break;
            }
        if (piv == rows)
            continue;
        if (piv != rank)
            std::swap_ranges(a.row(piv), a.row(piv) + cols, a.row(rank));
        Scalar* pr = a.row(rank);
        const Scalar inv = f.inv(pr[c]);
        for (std::size_t j = c; j < cols; ++j)
            pr[j] = f.mul(pr[j], inv);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank)
                continue;
            Scalar* tr = a.row(r);
            if (tr[c] != 0)
                dense_eliminate_row(f, tr, pr, c, cols, tr[c]);
        }
        pivots.push_back(c);
        ++rank;
    }
    std::vector<Scalar> flat;
    flat.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r)
        flat.insert(flat.end(), a.row(r), a.row(r) + cols);
    return {Matrix::from_dense_scalars(f, rows, cols, flat), rank, std::move(pivots)};
}

Rref dense_row_insertion(const Matrix& m)
{
    const PrimeField f = m.field();
    const std::size_t cols = m.cols();
    std::vector<Vec> basis;              // fully reduced rows
    std::vector<std::size_t> lead;       // pivot column of basis[k]
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Vec row = m.dense_row(r);
        for (std::size_t k = 0; k < basis.size(); ++k)
            if (row[lead[k]] != 0)
                dense_eliminate_row(f, row.data(), basis[k].data(), 0, cols, row[lead[k]]);
        auto it = std::find_if(row.begin(), row.end(), [](Scalar s) { return s != 0; });
        if (it == row.end())
            continue;
        const std::size_t c = static_cast<std::size_t>(it - row.begin());
        const Scalar inv = f.inv(row[c]);
        for (auto& s : row)
            s = f.mul(s, inv);
        for (auto& b : basis)
            if (b[c] != 0)
                dense_eliminate_row(f, b.data(), row.data(), 0, cols, b[c]);
        basis.push_back(std::move(row));
        lead.push_back(c);
    }
    std::vector<std::size_t> order(basis.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return lead[x] < lead[y]; });
    std::vector<Scalar> flat(m.rows() * cols, 0);
    std::vector<std::size_t> pivots;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::copy(basis[order[i]].begin(), basis[order[i]].end(), flat.begin() + i * cols);
        pivots.push_back(lead[order[i]]);
    }
    return {Matrix::from_dense_scalars(f, m.rows(), cols, flat), basis.size(), std::move(pivots)};
}

// --------------------------------------------------------------- sparse ---

/// a - factor * b for sorted sparse rows.
SparseRow sparse_sub_mul(const PrimeField& f, const SparseRow& a, Scalar factor, const SparseRow& b)
{
    SparseRow out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].col < a[i].col) {
            out.push_back({b[j].col, f.neg(f.mul(factor, b[j].value))});
            ++j;
        } else {
            Scalar v = f.sub_mul(a[i].value, factor, b[j].value);
            if (v != 0)
                out.push_back({a[i].col, v});
            ++i;
            ++j;
        }
    }
    return out;
}

Scalar sparse_at(const SparseRow& row, std::uint32_t c)
{
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::uint32_t col) { return e.col < col; });
    return (it != row.end() && it->col == c) ? it->value : 0;
}

Rref sparse_row_insertion(const Matrix& m)
{
    const PrimeField f = m.field();
    const std::size_t cols = m.cols();
    constexpr std::int64_t none = -1;
    std::vector<std::int64_t> pivot_of(cols, none);
    std::vector<SparseRow> basis;
    std::vector<std::uint32_t> lead;

    Vec acc(cols, 0);
    std::vector<char> mark(cols, 0);
    std::vector<std::uint32_t> touched;

    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        if (row.empty())
            continue;
        touched.clear();
        for (const auto& e : row) {
            acc[e.col] = e.value;
            mark[e.col] = 1;
            touched.push_back(e.col);
        }
        // Basis rows are fully reduced, so subtracting one never disturbs
        // another pivot column: the pivots to clear are those present in `row`.
        for (const auto& e : row) {
            const std::int64_t k = pivot_of[e.col];
            if (k == none)
                continue;
            const Scalar factor = acc[e.col];
            if (factor == 0)
                continue;
            for (const auto& x : basis[static_cast<std::size_t>(k)]) {
                if (!mark[x.col]) {
                    mark[x.col] = 1;
                    touched.push_back(x.col);
                }
                acc[x.col] = f.sub_mul(acc[x.col], factor, x.value);
            }
        }
        std::sort(touched.begin(), touched.end());
        SparseRow reduced;
        for (auto c : touched) {
            if (acc[c] != 0)
                reduced.push_back({c, acc[c]});
            acc[c] = 0;
            mark[c] = 0;
        }
        if (reduced.empty())
            continue;
        const std::uint32_t c = reduced.front().col;
        const Scalar inv = f.inv(reduced.front().value);
        for (auto& e : reduced)
            e.value = f.mul(e.value, inv);
        for (auto& b : basis) {
            const Scalar factor = sparse_at(b, c);
            if (factor != 0)
                b = sparse_sub_mul(f, b, factor, reduced);
        }
        pivot_of[c] = static_cast<std::int64_t>(basis.size());
        basis.push_back(std::move(reduced));
        lead.push_back(c);
    }

    std::vector<std::size_t> order(basis.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return lead[x] < lead[y]; });
    std::vector<Triplet> t;
    std::vector<std::size_t> pivots;
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (const auto& e : basis[order[i]])
            t.push_back({i, e.col, e.value});
        pivots.push_back(lead[order[i]]);
    }
    return {Matrix::from_triplets(f, m.rows(), cols, std::move(t)), basis.size(), std::move(pivots)};
}

// ------------------------------------------------------------ union-find ---

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return;
        if (a < b)
            parent_[b] = a;
        else
            parent_[a] = b;
    }

private:
    std::vector<std::size_t> parent_;
};

UnionFind column_components(const Matrix& a)
{
    UnionFind uf(a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto row = a.row(r);
        for (std::size_t i = 1; i < row.size(); ++i)
            uf.unite(row[0].col, row[i].col);
    }
    return uf;
}

} // namespace

Rref rref_rank(const Matrix& m, Backend backend, EliminationOrder order)
{
    switch (resolve_backend(backend, m.rows(), m.cols())) {
    case Backend::sparse:
        return sparse_row_insertion(m);
    default:
        return order == EliminationOrder::column_sweep ? dense_column_sweep(m) : dense_row_insertion(m);
    }
}

std::size_t rank(const Matrix& m, Backend backend) { return rref_rank(m, backend).rank; }

// ------------------------------------------------------ affine solutions ---

AffineSolutionSet::AffineSolutionSet(PrimeField field, Vec particular, std::vector<Vec> kernel_basis)
    : field_(field), particular_(std::move(particular)), kernel_basis_(std::move(kernel_basis))
{
    for (const auto& k : kernel_basis_)
        if (k.size() != particular_.size())
            throw Error(ErrorCode::dimension_mismatch, "kernel vector does not match ambient dimension");
}

AffineSolutionSet AffineSolutionSet::whole_space(PrimeField field, std::size_t dim)
{
    std::vector<Vec> basis;
    for (std::size_t i = 0; i < dim; ++i)
        basis.push_back(unit_vec(dim, i));
    return AffineSolutionSet(field, zero_vec(dim), std::move(basis));
}

std::size_t AffineSolutionSet::cardinality() const noexcept
{
    std::size_t n = 1;
    for (std::size_t i = 0; i < kernel_basis_.size(); ++i) {
        if (n > std::numeric_limits<std::size_t>::max() / field_.p())
            return std::numeric_limits<std::size_t>::max();
        n *= field_.p();
    }
    return n;
}

std::vector<Vec> AffineSolutionSet::enumerate(std::size_t limit) const
{
    const std::size_t count = cardinality();
    if (count > limit)
        throw Error(ErrorCode::budget_exceeded, "solution set has more than " + std::to_string(limit) + " members");
    std::vector<Vec> out;
    out.reserve(count);
    std::vector<Scalar> coeff(kernel_basis_.size(), 0);
    for (std::size_t n = 0; n < count; ++n) {
        Vec x = particular_;
        for (std::size_t i = 0; i < coeff.size(); ++i)
            axpy(field_, coeff[i], kernel_basis_[i], x);
        out.push_back(std::move(x));
        for (std::size_t i = coeff.size(); i-- > 0;) {
            if (++coeff[i] < field_.p())
                break;
            coeff[i] = 0;
        }
    }
    return out;
}

std::size_t leading_index(std::span<const Scalar> v) noexcept
{
    auto it = std::find_if(v.begin(), v.end(), [](Scalar s) { return s != 0; });
    return static_cast<std::size_t>(it - v.begin());
}

void reduce_modulo(const PrimeField& f, Vec& v, std::span<const Vec> echelon)
{
    for (const auto& row : echelon) {
        const std::size_t c = leading_index(row);
        if (v[c] != 0)
            axpy(f, f.neg(v[c]), row, v);
    }
}

AffineSolutionSet AffineSolutionSet::canonical() const
{
    std::vector<Vec> basis = row_space_basis(field_, ambient_dim(), kernel_basis_);
    Vec p = particular_;
    reduce_modulo(field_, p, basis);
    return AffineSolutionSet(field_, std::move(p), std::move(basis));
}

bool AffineSolutionSet::contains(std::span<const Scalar> x) const
{
    if (x.size() != ambient_dim())
        throw Error(ErrorCode::dimension_mismatch, "membership test with wrong ambient dimension");
    Vec d = sub(field_, x, particular_);
    reduce_modulo(field_, d, row_space_basis(field_, ambient_dim(), kernel_basis_));
    return is_zero(d);
}

bool AffineSolutionSet::same_set(const AffineSolutionSet& other) const
{
    return field_ == other.field_ && canonical() == other.canonical();
}

std::vector<Vec> row_space_basis(PrimeField field, std::size_t dim, std::span<const Vec> vectors)
{
    if (vectors.empty())
        return {};
    Rref r = rref_rank(Matrix::from_rows(field, dim, vectors));
    std::vector<Vec> out;
    out.reserve(r.rank);
    for (std::size_t i = 0; i < r.rank; ++i)
        out.push_back(r.reduced.dense_row(i));
    return out;
}

std::optional<AffineSolutionSet> solve_affine(const Matrix& a, std::span<const Scalar> b, Backend backend)
{
    if (b.size() != a.rows())
        throw Error(ErrorCode::dimension_mismatch,
                    "right-hand side has " + std::to_string(b.size()) + " entries, matrix has " + std::to_string(a.rows()) + " rows");
    const PrimeField f = a.field();
    const std::size_t n = a.cols();
    Vec bv(b.begin(), b.end());
    const Matrix rhs = Matrix::from_columns(f, a.rows(), std::span<const Vec>(&bv, 1));
    const Matrix blocks[] = {a, rhs};
    const Rref r = rref_rank(Matrix::hstack(blocks), backend);

    if (!r.pivots.empty() && r.pivots.back() == n)
        return std::nullopt;

    Vec particular(n, 0);
    std::vector<char> is_pivot(n, 0);
    for (std::size_t k = 0; k < r.rank; ++k) {
        particular[r.pivots[k]] = r.reduced.at(k, n);
        is_pivot[r.pivots[k]] = 1;
    }
    // column-oriented view of the reduced form for building kernel vectors
    const Matrix reduced_t = r.reduced.transpose();
    std::vector<Vec> kernel;
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c])
            continue;
        Vec v(n, 0);
        v[c] = 1;
        for (const auto& e : reduced_t.row(c))
            v[r.pivots[e.col]] = f.neg(e.value);
        kernel.push_back(std::move(v));
    }
    return AffineSolutionSet(f, std::move(particular), std::move(kernel));
}

std::vector<Vec> kernel_basis(const Matrix& a, Backend backend)
{
    return solve_affine(a, zero_vec(a.rows()), backend)->kernel_basis();
}

std::optional<AffineSolutionSet> intersect_affine_with_kernel(const AffineSolutionSet& s, const Matrix& b, Backend backend)
{
    if (b.cols() != s.ambient_dim())
        throw Error(ErrorCode::dimension_mismatch,
                    "operator has " + std::to_string(b.cols()) + " columns, solution set lives in dimension " + std::to_string(s.ambient_dim()));
    if (b.field() != s.field())
        throw Error(ErrorCode::field_mismatch, "operator and solution set over different fields");
    const PrimeField f = s.field();
    const Vec bp = b.apply(s.particular());
    if (s.dimension() == 0) {
        if (!is_zero(bp))
            return std::nullopt;
        return s.canonical();
    }
    const Matrix k = Matrix::from_columns(f, s.ambient_dim(), s.kernel_basis());
    const Matrix bk = b * k;
    const auto coeffs = solve_affine(bk, scale(f, f.neg(1), bp), backend);
    if (!coeffs)
        return std::nullopt;
    Vec particular = add(f, s.particular(), k.apply(coeffs->particular()));
    std::vector<Vec> basis;
    for (const auto& c : coeffs->kernel_basis())
        basis.push_back(k.apply(c));
    return AffineSolutionSet(f, std::move(particular), std::move(basis)).canonical();
}

// ------------------------------------------------------------ block form ---

std::vector<std::vector<std::size_t>> column_blocks(const Matrix& a)
{
    UnionFind uf = column_components(a);
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::int64_t> block_of_root(a.cols(), -1);
    for (std::size_t c = 0; c < a.cols(); ++c) {
        const std::size_t root = uf.find(c);
        if (block_of_root[root] < 0) {
            block_of_root[root] = static_cast<std::int64_t>(blocks.size());
            blocks.emplace_back();
        }
        blocks[static_cast<std::size_t>(block_of_root[root])].push_back(c);
    }
    return blocks;
}

LocalizedSystem localize(const Matrix& a, std::span<const Scalar> rhs)
{
    if (rhs.size() != a.rows())
        throw Error(ErrorCode::dimension_mismatch, "right-hand side does not match matrix rows");
    UnionFind uf = column_components(a);
    std::vector<char> selected_root(a.cols(), 0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto row = a.row(r);
        if (rhs[r] != 0 && !row.empty())
            selected_root[uf.find(row[0].col)] = 1;
    }
    LocalizedSystem out{{}, {}, Matrix(a.field(), 0, 0), {}};
    for (std::size_t c = 0; c < a.cols(); ++c)
        if (selected_root[uf.find(c)])
            out.cols.push_back(c);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto row = a.row(r);
        const bool keep = row.empty() ? rhs[r] != 0 : selected_root[uf.find(row[0].col)] != 0;
        if (keep) {
            out.rows.push_back(r);
            out.rhs.push_back(rhs[r]);
        }
    }
    out.matrix = a.select_rows(out.rows).select_columns(out.cols);
    return out;
}

std::size_t block_rank(const Matrix& a)
{
    UnionFind uf = column_components(a);
    // group rows by block root
    std::vector<std::vector<std::size_t>> rows_of(a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto row = a.row(r);
        if (!row.empty())
            rows_of[uf.find(row[0].col)].push_back(r);
    }
    std::vector<std::vector<std::size_t>> cols_of(a.cols());
    for (std::size_t c = 0; c < a.cols(); ++c)
        cols_of[uf.find(c)].push_back(c);
    std::vector<std::uint32_t> local(a.cols(), 0);
    std::size_t total = 0;
    for (std::size_t root = 0; root < a.cols(); ++root) {
        if (rows_of[root].empty())
            continue;
        const auto& cols = cols_of[root];
        for (std::size_t i = 0; i < cols.size(); ++i)
            local[cols[i]] = static_cast<std::uint32_t>(i);
        std::vector<Triplet> t;
        for (std::size_t i = 0; i < rows_of[root].size(); ++i)
            for (const auto& e : a.row(rows_of[root][i]))
                t.push_back({i, local[e.col], e.value});
        total += rank(Matrix::from_triplets(a.field(), rows_of[root].size(), cols.size(), std::move(t)));
    }
    return total;
}

} // namespace homcert
