#include "homcert/algebra.hpp"

#include "homcert/error.hpp"
#include "homcert/linalg.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace homcert {

namespace detail {

struct AlgebraTable {
    std::size_t dim = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<Entry>> products; // products[u * dim + v] = e_u e_v
    Vec unit;
    std::vector<Vec> maxideal;
    std::optional<LocalityCertificate> locality;
    std::string locality_failure;

    const std::vector<Entry>& product(std::size_t u, std::size_t v) const { return products[u * dim + v]; }

    friend bool operator==(const AlgebraTable& a, const AlgebraTable& b)
    {
        return a.dim == b.dim && a.labels == b.labels && a.products == b.products && a.unit == b.unit && a.maxideal == b.maxideal;
    }
};

} // namespace detail

namespace {

using detail::AlgebraTable;

Vec table_multiply(const PrimeField& f, const AlgebraTable& t, std::span<const Scalar> a, std::span<const Scalar> b)
{
    Vec out(t.dim, 0);
    for (std::size_t u = 0; u < t.dim; ++u) {
        if (a[u] == 0)
            continue;
        for (std::size_t v = 0; v < t.dim; ++v) {
            if (b[v] == 0)
                continue;
            const Scalar s = f.mul(a[u], b[v]);
            for (const auto& e : t.product(u, v))
                out[e.col] = f.add(out[e.col], f.mul(s, e.value));
        }
    }
    return out;
}

// Least N with m^N = 0, computed from successive ideal powers.
void compute_locality(const PrimeField& f, AlgebraTable& t)
{
    const std::size_t n = t.dim;
    std::vector<Vec> m = row_space_basis(f, n, t.maxideal);
    const std::size_t codim = n - m.size();
    if (codim != 1) {
        t.locality_failure = "maximal ideal has codimension " + std::to_string(codim) + ", expected 1";
        return;
    }
    // m must be an ideal: e_u * g in span(m)
    for (std::size_t u = 0; u < n; ++u) {
        for (const auto& g : m) {
            Vec prod = table_multiply(f, t, unit_vec(n, u), g);
            reduce_modulo(f, prod, m);
            if (!is_zero(prod)) {
                t.locality_failure = "span of the maximal ideal basis is not closed under multiplication by " + t.labels[u];
                return;
            }
        }
    }
    std::vector<Vec> power = m;
    std::size_t exponent = 1;
    while (!power.empty()) {
        if (exponent > n) {
            t.locality_failure = "maximal ideal is not nilpotent";
            return;
        }
        std::vector<Vec> next;
        for (const auto& g : m)
            for (const auto& h : power)
                next.push_back(table_multiply(f, t, g, h));
        power = row_space_basis(f, n, next);
        ++exponent;
    }
    t.locality = LocalityCertificate{exponent, codim, "ideal-powers"};
}

std::string join_labels(const std::vector<std::string>& parts)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += "⊗";
        out += parts[i];
    }
    return out;
}

} // namespace

FiniteDimAlgebra::FiniteDimAlgebra(PrimeField field, std::vector<std::shared_ptr<const AlgebraTable>> factors)
    : field_(field), factors_(std::move(factors)), dim_(1)
{
    for (const auto& t : factors_)
        dim_ *= t->dim;
    strides_.assign(factors_.size(), 1);
    for (std::size_t i = factors_.size(); i-- > 1;)
        strides_[i - 1] = strides_[i] * factors_[i]->dim;
}

FiniteDimAlgebra FiniteDimAlgebra::from_structure_constants(PrimeField field, std::vector<std::string> labels,
                                                            std::span<const StructureConstant> table, Vec unit,
                                                            std::vector<Vec> maxideal_basis)
{
    auto t = std::make_shared<AlgebraTable>();
    const std::size_t n = labels.size();
    if (n == 0)
        throw Error(ErrorCode::dimension_mismatch, "algebra must have positive dimension");
    t->dim = n;
    t->labels = std::move(labels);
    if (unit.size() != n)
        throw Error(ErrorCode::dimension_mismatch, "unit vector has " + std::to_string(unit.size()) + " coordinates, algebra has dimension " + std::to_string(n));
    for (auto& s : unit)
        s %= field.p();
    t->unit = std::move(unit);
    for (auto& g : maxideal_basis) {
        if (g.size() != n)
            throw Error(ErrorCode::dimension_mismatch, "maximal ideal vector has wrong dimension");
        for (auto& s : g)
            s %= field.p();
    }
    t->maxideal = std::move(maxideal_basis);

    std::vector<Vec> dense(n * n, Vec(n, 0));
    for (const auto& c : table) {
        if (c.u >= n || c.v >= n || c.w >= n)
            throw Error(ErrorCode::index_out_of_range,
                        "structure constant (" + std::to_string(c.u) + "," + std::to_string(c.v) + "," + std::to_string(c.w) + ") out of range");
        Scalar& slot = dense[c.u * n + c.v][c.w];
        slot = field.add(slot, field.from_int(c.scalar));
    }
    t->products.resize(n * n);
    for (std::size_t i = 0; i < n * n; ++i)
        for (std::size_t w = 0; w < n; ++w)
            if (dense[i][w] != 0)
                t->products[i].push_back({static_cast<std::uint32_t>(w), dense[i][w]});

    for (std::size_t v = 0; v < n; ++v) {
        const Vec ev = unit_vec(n, v);
        if (table_multiply(field, *t, t->unit, ev) != ev || table_multiply(field, *t, ev, t->unit) != ev)
            throw Error(ErrorCode::not_unital, "declared unit does not act as the identity on " + t->labels[v]);
    }
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (t->product(u, v) != t->product(v, u))
                throw Error(ErrorCode::not_commutative, t->labels[u] + "*" + t->labels[v] + " != " + t->labels[v] + "*" + t->labels[u]);
    for (std::size_t u = 0; u < n; ++u) {
        const Vec eu = unit_vec(n, u);
        for (std::size_t v = 0; v < n; ++v) {
            const Vec uv = table_multiply(field, *t, eu, unit_vec(n, v));
            for (std::size_t w = 0; w < n; ++w) {
                const Vec ew = unit_vec(n, w);
                if (table_multiply(field, *t, uv, ew) != table_multiply(field, *t, eu, table_multiply(field, *t, unit_vec(n, v), ew)))
                    throw Error(ErrorCode::not_associative,
                                "(" + t->labels[u] + "*" + t->labels[v] + ")*" + t->labels[w] + " != " + t->labels[u] + "*(" + t->labels[v] + "*" + t->labels[w] + ")");
            }
        }
    }
    compute_locality(field, *t);
    return FiniteDimAlgebra(field, {std::move(t)});
}

FiniteDimAlgebra FiniteDimAlgebra::factor(std::size_t i) const
{
    if (i >= factors_.size())
        throw Error(ErrorCode::index_out_of_range, "tensor factor index out of range");
    return FiniteDimAlgebra(field_, {factors_[i]});
}

std::vector<std::size_t> FiniteDimAlgebra::digits(std::size_t u) const
{
    if (u >= dim_)
        throw Error(ErrorCode::index_out_of_range, "basis index out of range");
    std::vector<std::size_t> d(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        d[i] = u / strides_[i];
        u %= strides_[i];
    }
    return d;
}

std::string FiniteDimAlgebra::basis_label(std::size_t u) const
{
    const auto d = digits(u);
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < d.size(); ++i)
        parts.push_back(factors_[i]->labels[d[i]]);
    return join_labels(parts);
}

std::vector<Entry> FiniteDimAlgebra::multiply_basis(std::size_t u, std::size_t v) const
{
    const auto du = digits(u);
    const auto dv = digits(v);
    std::vector<Entry> acc{{0, 1}};
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& slot = factors_[i]->product(du[i], dv[i]);
        if (slot.empty())
            return {};
        std::vector<Entry> next;
        next.reserve(acc.size() * slot.size());
        for (const auto& a : acc)
            for (const auto& b : slot)
                next.push_back({static_cast<std::uint32_t>(a.col * factors_[i]->dim + b.col), field_.mul(a.value, b.value)});
        acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
    return acc;
}

Vec FiniteDimAlgebra::multiply(std::span<const Scalar> a, std::span<const Scalar> b) const
{
    if (a.size() != dim_ || b.size() != dim_)
        throw Error(ErrorCode::dimension_mismatch, "algebra element has wrong dimension");
    Vec out(dim_, 0);
    for (std::size_t u = 0; u < dim_; ++u) {
        if (a[u] == 0)
            continue;
        for (std::size_t v = 0; v < dim_; ++v) {
            if (b[v] == 0)
                continue;
            const Scalar s = field_.mul(a[u], b[v]);
            for (const auto& e : multiply_basis(u, v))
                out[e.col] = field_.add(out[e.col], field_.mul(s, e.value));
        }
    }
    return out;
}

Matrix FiniteDimAlgebra::multiplication_matrix(std::span<const Scalar> a) const
{
    if (a.size() != dim_)
        throw Error(ErrorCode::dimension_mismatch, "algebra element has wrong dimension");
    std::vector<Triplet> t;
    for (std::size_t u = 0; u < dim_; ++u) {
        if (a[u] == 0)
            continue;
        for (std::size_t v = 0; v < dim_; ++v)
            for (const auto& e : multiply_basis(u, v))
                t.push_back({e.col, v, field_.mul(a[u], e.value)});
    }
    return Matrix::from_triplets(field_, dim_, dim_, std::move(t));
}

Matrix FiniteDimAlgebra::multiplication_matrix(std::size_t basis_index) const
{
    std::vector<Triplet> t;
    for (std::size_t v = 0; v < dim_; ++v)
        for (const auto& e : multiply_basis(basis_index, v))
            t.push_back({e.col, v, e.value});
    return Matrix::from_triplets(field_, dim_, dim_, std::move(t));
}

Vec FiniteDimAlgebra::unit() const
{
    Vec acc{1};
    for (const auto& t : factors_)
        acc = kron(field_, acc, t->unit);
    return acc;
}

std::vector<Vec> FiniteDimAlgebra::maxideal_basis() const
{
    if (factors_.size() == 1)
        return factors_.front()->maxideal;
    // Products of {unit} + m_i bases over all factors, omitting unit (x) ... (x) unit.
    std::vector<std::vector<Vec>> adapted;
    for (const auto& t : factors_) {
        std::vector<Vec> a{t->unit};
        a.insert(a.end(), t->maxideal.begin(), t->maxideal.end());
        adapted.push_back(std::move(a));
    }
    std::vector<std::size_t> idx(factors_.size(), 0);
    std::vector<Vec> out;
    while (true) {
        std::size_t i = idx.size();
        while (i-- > 0) {
            if (++idx[i] < adapted[i].size())
                break;
            idx[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1))
            break;
        Vec v{1};
        for (std::size_t s = 0; s < idx.size(); ++s)
            v = kron(field_, v, adapted[s][idx[s]]);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<Vec> FiniteDimAlgebra::minimal_generators() const
{
    const std::vector<Vec> m = row_space_basis(field_, dim_, maxideal_basis());
    std::vector<Vec> span_vectors;
    for (const auto& g : m)
        for (const auto& h : m)
            span_vectors.push_back(multiply(g, h));
    std::size_t current = row_space_basis(field_, dim_, span_vectors).size();
    std::vector<Vec> gens;
    for (const auto& g : m) {
        span_vectors.push_back(g);
        const std::size_t r = row_space_basis(field_, dim_, span_vectors).size();
        if (r > current) {
            gens.push_back(g);
            current = r;
        } else {
            span_vectors.pop_back();
        }
    }
    return gens;
}

Vec FiniteDimAlgebra::residue_functional() const
{
    if (!is_local())
        throw Error(ErrorCode::not_local, locality_failure());
    std::vector<Vec> rows = maxideal_basis();
    rows.push_back(unit());
    Vec rhs(rows.size(), 0);
    rhs.back() = 1;
    const auto sol = solve_affine(Matrix::from_rows(field_, dim_, rows), rhs);
    if (!sol)
        throw Error(ErrorCode::not_local, "unit lies in the maximal ideal");
    return sol->particular();
}

bool FiniteDimAlgebra::is_local() const noexcept
{
    return std::all_of(factors_.begin(), factors_.end(), [](const auto& t) { return t->locality.has_value(); });
}

std::string FiniteDimAlgebra::locality_failure() const
{
    for (const auto& t : factors_)
        if (!t->locality)
            return t->locality_failure;
    return {};
}

FiniteDimAlgebra FiniteDimAlgebra::flattened(std::size_t max_dim) const
{
    if (dim_ > max_dim)
        throw Error(ErrorCode::budget_exceeded, "flattening an algebra of dimension " + std::to_string(dim_));
    if (factors_.size() == 1)
        return *this;
    auto t = std::make_shared<AlgebraTable>();
    t->dim = dim_;
    for (std::size_t u = 0; u < dim_; ++u)
        t->labels.push_back(basis_label(u));
    t->products.resize(dim_ * dim_);
    for (std::size_t u = 0; u < dim_; ++u)
        for (std::size_t v = 0; v < dim_; ++v)
            t->products[u * dim_ + v] = multiply_basis(u, v);
    t->unit = unit();
    t->maxideal = maxideal_basis();
    compute_locality(field_, *t);
    return FiniteDimAlgebra(field_, {std::move(t)});
}

bool operator==(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b)
{
    if (a.field_ != b.field_ || a.factors_.size() != b.factors_.size())
        return false;
    for (std::size_t i = 0; i < a.factors_.size(); ++i)
        if (a.factors_[i] != b.factors_[i] && !(*a.factors_[i] == *b.factors_[i]))
            return false;
    return true;
}

bool same_structure(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b)
{
    if (a.field() != b.field() || a.dim() != b.dim() || a.unit() != b.unit())
        return false;
    for (std::size_t u = 0; u < a.dim(); ++u)
        for (std::size_t v = 0; v < a.dim(); ++v)
            if (a.multiply_basis(u, v) != b.multiply_basis(u, v))
                return false;
    return row_space_basis(a.field(), a.dim(), a.maxideal_basis()) == row_space_basis(b.field(), b.dim(), b.maxideal_basis());
}

FiniteDimAlgebra truncated_polynomial_algebra(PrimeField field, std::size_t exponent)
{
    if (exponent < 2)
        throw Error(ErrorCode::invalid_exponent, "truncation exponent must be at least 2, got " + std::to_string(exponent));
    std::vector<std::string> labels{"1", "x"};
    for (std::size_t i = 2; i < exponent; ++i)
        labels.push_back("x^" + std::to_string(i));
    std::vector<StructureConstant> table;
    for (std::size_t i = 0; i < exponent; ++i)
        for (std::size_t j = 0; i + j < exponent; ++j)
            table.push_back({i, j, i + j, 1});
    std::vector<Vec> m;
    for (std::size_t i = 1; i < exponent; ++i)
        m.push_back(unit_vec(exponent, i));
    return FiniteDimAlgebra::from_structure_constants(field, std::move(labels), table, unit_vec(exponent, 0), std::move(m));
}

FiniteDimAlgebra ground_field_algebra(PrimeField field)
{
    const StructureConstant one{0, 0, 0, 1};
    return FiniteDimAlgebra::from_structure_constants(field, {"1"}, std::span(&one, 1), Vec{1}, {});
}

FiniteDimAlgebra square_zero_algebra(PrimeField field, std::size_t generators)
{
    const std::size_t n = generators + 1;
    std::vector<std::string> labels{"1"};
    std::vector<StructureConstant> table;
    std::vector<Vec> m;
    table.push_back({0, 0, 0, 1});
    for (std::size_t i = 1; i < n; ++i) {
        labels.push_back(generators == 1 ? "x" : "x" + std::to_string(i));
        table.push_back({0, i, i, 1});
        table.push_back({i, 0, i, 1});
        m.push_back(unit_vec(n, i));
    }
    return FiniteDimAlgebra::from_structure_constants(field, std::move(labels), table, unit_vec(n, 0), std::move(m));
}

FiniteDimAlgebra tensor_algebra(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b)
{
    if (a.field() != b.field())
        throw Error(ErrorCode::field_mismatch,
                    "tensor of algebras over F_" + std::to_string(a.field().p()) + " and F_" + std::to_string(b.field().p()));
    auto factors = a.factors_;
    factors.insert(factors.end(), b.factors_.begin(), b.factors_.end());
    return FiniteDimAlgebra(a.field(), std::move(factors));
}

FiniteDimAlgebra tensor_power(const FiniteDimAlgebra& a, std::size_t n)
{
    if (n == 0)
        throw Error(ErrorCode::index_out_of_range, "tensor power needs at least one factor");
    FiniteDimAlgebra out = a;
    for (std::size_t i = 1; i < n; ++i)
        out = tensor_algebra(out, a);
    return out;
}

LocalityCertificate verify_local(const FiniteDimAlgebra& a)
{
    if (!a.is_local())
        throw Error(ErrorCode::not_local, a.locality_failure());
    if (a.factors_.size() == 1)
        return *a.factors_.front()->locality;
    // (m_1 + ... + m_r)^N = sum of m_1^{a_1} (x) ... (x) m_r^{a_r} over sum a_i = N,
    // which is nonzero iff some a_i <= N_i - 1 for all i: N = sum(N_i) - (r - 1).
    std::size_t n = 1;
    for (const auto& t : a.factors_)
        n += t->locality->nilpotency_index - 1;
    return {n, 1, "tensor-factors"};
}

LocalityCertificate verify_local_by_ideal_powers(const FiniteDimAlgebra& a)
{
    FiniteDimAlgebra flat = a.flattened();
    if (!flat.is_local())
        throw Error(ErrorCode::not_local, flat.locality_failure());
    return verify_local(flat);
}

// ------------------------------------------------------------ morphisms ---

AlgebraMorphism::AlgebraMorphism(FiniteDimAlgebra source, FiniteDimAlgebra target, Matrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix))
{
    if (source_.field() != target_.field() || matrix_.field() != source_.field())
        throw Error(ErrorCode::field_mismatch, "morphism between algebras over different fields");
    if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
        throw Error(ErrorCode::dimension_mismatch, "morphism matrix does not match algebra dimensions");
    if (!preserves_unit())
        throw Error(ErrorCode::validation_error, "map does not preserve the unit");
    if (!preserves_multiplication())
        throw Error(ErrorCode::validation_error, "map does not preserve multiplication");
}

bool AlgebraMorphism::preserves_unit() const { return apply(source_.unit()) == target_.unit(); }

bool AlgebraMorphism::preserves_multiplication() const
{
    const std::size_t n = source_.dim();
    std::vector<Vec> images;
    for (std::size_t u = 0; u < n; ++u)
        images.push_back(matrix_.column(u));
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            Vec uv(n, 0);
            for (const auto& e : source_.multiply_basis(u, v))
                uv[e.col] = e.value;
            if (apply(uv) != target_.multiply(images[u], images[v]))
                return false;
        }
    }
    return true;
}

AlgebraMorphism compose(const AlgebraMorphism& outer, const AlgebraMorphism& inner)
{
    if (!(inner.target() == outer.source()))
        throw Error(ErrorCode::validation_error, "composed morphisms do not share an algebra");
    return AlgebraMorphism(inner.source(), outer.target(), outer.matrix() * inner.matrix());
}

AlgebraMorphism factor_embedding(const FiniteDimAlgebra& r1, std::size_t n, std::size_t j)
{
    if (j < 1 || j > n)
        throw Error(ErrorCode::index_out_of_range, "factor index " + std::to_string(j) + " outside 1.." + std::to_string(n));
    FiniteDimAlgebra target = tensor_power(r1, n);
    const PrimeField f = r1.field();
    const Vec one = r1.unit();
    std::vector<Triplet> t;
    for (std::size_t u = 0; u < r1.dim(); ++u) {
        Vec v{1};
        for (std::size_t slot = 1; slot <= n; ++slot)
            v = kron(f, v, slot == j ? unit_vec(r1.dim(), u) : one);
        for (std::size_t w = 0; w < v.size(); ++w)
            if (v[w] != 0)
                t.push_back({w, u, v[w]});
    }
    Matrix m = Matrix::from_triplets(f, target.dim(), r1.dim(), std::move(t));
    return AlgebraMorphism(r1, std::move(target), std::move(m));
}

AlgebraMorphism stage_inclusion(const FiniteDimAlgebra& r1, std::size_t n)
{
    FiniteDimAlgebra source = tensor_power(r1, n);
    FiniteDimAlgebra target = tensor_power(r1, n + 1);
    const Vec one = r1.unit();
    std::vector<Triplet> t;
    for (std::size_t u = 0; u < source.dim(); ++u)
        for (std::size_t w = 0; w < one.size(); ++w)
            if (one[w] != 0)
                t.push_back({u * r1.dim() + w, u, one[w]});
    Matrix m = Matrix::from_triplets(r1.field(), target.dim(), source.dim(), std::move(t));
    return AlgebraMorphism(std::move(source), std::move(target), std::move(m));
}

} // namespace homcert
