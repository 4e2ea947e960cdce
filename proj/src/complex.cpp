#include "homcert/complex.hpp"

#include "homcert/error.hpp"

#include <algorithm>
#include <string>

namespace homcert {

namespace {

void append_block(std::vector<Triplet>& out, const Matrix& m, std::size_t row_offset, std::size_t col_offset, Scalar scale,
                  const PrimeField& f)
{
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& e : m.row(r))
            out.push_back({row_offset + r, col_offset + e.col, f.mul(scale, e.value)});
}

} // namespace

CochainComplex::CochainComplex(int lo, std::vector<FDModule> modules, std::vector<Matrix> differentials)
    : lo_(lo), modules_(std::move(modules)), differentials_(std::move(differentials))
{
    if (modules_.empty())
        throw Error(ErrorCode::invalid_argument, "complex needs at least one term");
    if (differentials_.size() + 1 != modules_.size())
        throw Error(ErrorCode::dimension_mismatch, "complex with " + std::to_string(modules_.size()) + " terms needs "
                                                       + std::to_string(modules_.size() - 1) + " differentials");
    for (const auto& m : modules_)
        if (!(m.algebra() == modules_.front().algebra()))
            throw Error(ErrorCode::validation_error, "complex terms over different algebras");
    for (std::size_t k = 0; k < differentials_.size(); ++k) {
        const Matrix& d = differentials_[k];
        const int deg = lo_ + static_cast<int>(k);
        if (d.rows() != modules_[k + 1].dim() || d.cols() != modules_[k].dim())
            throw Error(ErrorCode::dimension_mismatch, "differential d^" + std::to_string(deg) + " has the wrong shape");
        if (!is_module_map(modules_[k], modules_[k + 1], d))
            throw Error(ErrorCode::validation_error, "differential d^" + std::to_string(deg) + " is not a module map");
        if (k + 1 < differentials_.size() && !(differentials_[k + 1] * d).is_zero())
            throw Error(ErrorCode::validation_error, "d^" + std::to_string(deg + 1) + " d^" + std::to_string(deg) + " != 0");
    }
}

CochainComplex CochainComplex::concentrated(const FDModule& m, int degree) { return CochainComplex(degree, {m}, {}); }

const FDModule& CochainComplex::module(int n) const
{
    if (!in_range(n))
        throw Error(ErrorCode::index_out_of_range, "degree " + std::to_string(n) + " outside the complex");
    return modules_[static_cast<std::size_t>(n - lo_)];
}

std::size_t CochainComplex::dim(int n) const noexcept
{
    return in_range(n) ? modules_[static_cast<std::size_t>(n - lo_)].dim() : 0;
}

Matrix CochainComplex::differential(int n) const
{
    if (n >= lo_ && n < hi())
        return differentials_[static_cast<std::size_t>(n - lo_)];
    return Matrix(field(), dim(n + 1), dim(n));
}

const std::vector<Summand>& MultiIndexedComplex::summands_in(int n) const
{
    if (!complex.in_range(n))
        throw Error(ErrorCode::index_out_of_range, "degree " + std::to_string(n) + " outside the complex");
    return summands[static_cast<std::size_t>(n - complex.lo())];
}

const Summand& MultiIndexedComplex::summand(std::span<const int> index) const
{
    int degree = 0;
    for (int l : index)
        degree += l;
    if (complex.in_range(degree))
        for (const auto& s : summands_in(degree))
            if (std::equal(s.index.begin(), s.index.end(), index.begin(), index.end()))
                return s;
    throw Error(ErrorCode::index_out_of_range, "no summand with this multi-index");
}

MultiIndexedComplex with_degree_labels(const CochainComplex& c)
{
    std::vector<std::vector<Summand>> summands;
    for (int n = c.lo(); n <= c.hi(); ++n)
        summands.push_back({Summand{{n}, 0, c.dim(n)}});
    return {c, std::move(summands)};
}

MultiIndexedComplex tensor_complexes(const MultiIndexedComplex& mc, const CochainComplex& d, int max_degree)
{
    const CochainComplex& c = mc.complex;
    if (c.field() != d.field())
        throw Error(ErrorCode::field_mismatch, "tensor of complexes over different fields");
    const PrimeField f = c.field();
    const FiniteDimAlgebra alg = tensor_algebra(c.algebra(), d.algebra());
    const int lo = c.lo() + d.lo();
    const int hi = std::min(c.hi() + d.hi(), max_degree);
    if (hi < lo)
        throw Error(ErrorCode::invalid_argument, "degree cap below the lowest degree");

    // offset[t - lo][u - c.lo()] = start of the C^u (x) D^{t-u} block in degree t
    auto u_range = [&](int t) { return std::pair{std::max(c.lo(), t - d.hi()), std::min(c.hi(), t - d.lo())}; };
    std::vector<std::vector<std::size_t>> offset;
    std::vector<FDModule> modules;
    std::vector<std::vector<Summand>> summands;
    for (int t = lo; t <= hi; ++t) {
        std::vector<std::size_t> off(static_cast<std::size_t>(c.hi() - c.lo() + 1), 0);
        std::vector<FDModule> parts;
        std::vector<Summand> ss;
        std::size_t running = 0;
        const auto [u0, u1] = u_range(t);
        for (int u = u0; u <= u1; ++u) {
            const int v = t - u;
            off[static_cast<std::size_t>(u - c.lo())] = running;
            parts.push_back(tensor_module(c.module(u), d.module(v)));
            for (const auto& s : mc.summands_in(u)) {
                Summand n{s.index, running + s.offset * d.dim(v), s.dim * d.dim(v)};
                n.index.push_back(v);
                ss.push_back(std::move(n));
            }
            running += c.dim(u) * d.dim(v);
        }
        modules.push_back(parts.empty() ? zero_module(alg) : direct_sum(parts));
        summands.push_back(std::move(ss));
        offset.push_back(std::move(off));
    }

    std::vector<Matrix> differentials;
    for (int t = lo; t < hi; ++t) {
        std::vector<Triplet> trip;
        const auto [u0, u1] = u_range(t);
        const auto [w0, w1] = u_range(t + 1);
        const auto& src = offset[static_cast<std::size_t>(t - lo)];
        const auto& dst = offset[static_cast<std::size_t>(t + 1 - lo)];
        for (int u = u0; u <= u1; ++u) {
            const int v = t - u;
            const std::size_t col = src[static_cast<std::size_t>(u - c.lo())];
            if (u + 1 >= w0 && u + 1 <= w1)
                append_block(trip, Matrix::kron(c.differential(u), Matrix::identity(f, d.dim(v))),
                             dst[static_cast<std::size_t>(u + 1 - c.lo())], col, 1, f);
            if (u >= w0 && u <= w1)
                append_block(trip, Matrix::kron(Matrix::identity(f, c.dim(u)), d.differential(v)),
                             dst[static_cast<std::size_t>(u - c.lo())], col, f.sign(u), f);
        }
        differentials.push_back(Matrix::from_triplets(f, modules[static_cast<std::size_t>(t + 1 - lo)].dim(),
                                                      modules[static_cast<std::size_t>(t - lo)].dim(), std::move(trip)));
    }
    return {CochainComplex(lo, std::move(modules), std::move(differentials)), std::move(summands)};
}

MultiIndexedComplex tensor_complexes(const CochainComplex& c, const CochainComplex& d, int max_degree)
{
    return tensor_complexes(with_degree_labels(c), d, max_degree);
}

MultiIndexedComplex tensor_power(const CochainComplex& c, std::size_t n, int max_degree)
{
    if (n == 0)
        throw Error(ErrorCode::invalid_argument, "tensor power needs n >= 1");
    if (c.lo() > max_degree)
        throw Error(ErrorCode::invalid_argument, "degree cap below the lowest degree");
    std::vector<FDModule> modules;
    std::vector<Matrix> differentials;
    for (int m = c.lo(); m <= std::min(c.hi(), max_degree); ++m) {
        modules.push_back(c.module(m));
        if (m > c.lo())
            differentials.push_back(c.differential(m - 1));
    }
    MultiIndexedComplex acc = with_degree_labels(CochainComplex(c.lo(), std::move(modules), std::move(differentials)));
    for (std::size_t k = 1; k < n; ++k)
        acc = tensor_complexes(acc, c, max_degree);
    return acc;
}

Cohomology cohomology(const CochainComplex& c, int n, Backend backend)
{
    const PrimeField f = c.field();
    const std::size_t dn = c.dim(n);
    if (dn == 0)
        return {};
    const std::vector<Vec> cycles = c.dim(n + 1) == 0 ? AffineSolutionSet::whole_space(f, dn).kernel_basis()
                                                      : kernel_basis(c.differential(n), backend);
    const Matrix incoming = c.differential(n - 1);
    std::vector<Vec> boundaries;
    for (std::size_t k = 0; k < incoming.cols(); ++k)
        boundaries.push_back(incoming.column(k));
    std::vector<Vec> echelon = row_space_basis(f, dn, boundaries);
    Cohomology out;
    for (const auto& z : cycles) {
        Vec r = z;
        reduce_modulo(f, r, echelon);
        if (is_zero(r))
            continue;
        out.representatives.push_back(z);
        echelon.push_back(std::move(r));
        echelon = row_space_basis(f, dn, echelon);
    }
    out.dim = out.representatives.size();
    return out;
}

std::size_t cohomology_dim(const CochainComplex& c, int n, Backend backend)
{
    const std::size_t dn = c.dim(n);
    if (dn == 0)
        return 0;
    return dn - rank(c.differential(n), backend) - rank(c.differential(n - 1), backend);
}

CochainComplex truncate_geq(const CochainComplex& c, int n)
{
    if (n <= c.lo())
        return c;
    if (n > c.hi())
        return CochainComplex::concentrated(zero_module(c.algebra()), n);
    const Matrix incoming = c.differential(n - 1);
    std::vector<Vec> image;
    for (std::size_t k = 0; k < incoming.cols(); ++k)
        image.push_back(incoming.column(k));
    Quotient q = quotient_module(c.module(n), image);
    std::vector<FDModule> modules{q.module};
    std::vector<Matrix> differentials;
    for (int m = n + 1; m <= c.hi(); ++m)
        modules.push_back(c.module(m));
    if (n < c.hi())
        differentials.push_back(c.differential(n) * q.section);
    for (int m = n + 1; m < c.hi(); ++m)
        differentials.push_back(c.differential(m));
    return CochainComplex(n, std::move(modules), std::move(differentials));
}

CochainComplex shift(const CochainComplex& c, int i)
{
    const Scalar s = c.field().sign(i);
    std::vector<FDModule> modules;
    std::vector<Matrix> differentials;
    for (int m = c.lo(); m <= c.hi(); ++m)
        modules.push_back(c.module(m));
    for (int m = c.lo(); m < c.hi(); ++m)
        differentials.push_back(c.differential(m).scaled(s));
    return CochainComplex(c.lo() - i, std::move(modules), std::move(differentials));
}

CochainComplex finite_sum(std::span<const CochainComplex> parts)
{
    if (parts.empty())
        throw Error(ErrorCode::invalid_argument, "sum of no complexes");
    const FiniteDimAlgebra& alg = parts.front().algebra();
    const PrimeField f = alg.field();
    int lo = parts.front().lo(), hi = parts.front().hi();
    for (const auto& p : parts) {
        if (!(p.algebra() == alg))
            throw Error(ErrorCode::validation_error, "sum of complexes over different algebras");
        lo = std::min(lo, p.lo());
        hi = std::max(hi, p.hi());
    }
    std::vector<FDModule> modules;
    for (int n = lo; n <= hi; ++n) {
        std::vector<FDModule> terms;
        for (const auto& p : parts)
            if (p.in_range(n))
                terms.push_back(p.module(n));
        modules.push_back(terms.empty() ? zero_module(alg) : direct_sum(terms));
    }
    std::vector<Matrix> differentials;
    for (int n = lo; n < hi; ++n) {
        std::vector<Triplet> trip;
        std::size_t row = 0, col = 0;
        for (const auto& p : parts) {
            append_block(trip, p.differential(n), row, col, 1, f);
            row += p.dim(n + 1);
            col += p.dim(n);
        }
        differentials.push_back(Matrix::from_triplets(f, row, col, std::move(trip)));
    }
    return CochainComplex(lo, std::move(modules), std::move(differentials));
}

CochainComplex finite_product(std::span<const CochainComplex> parts) { return finite_sum(parts); }

std::optional<AffineSolutionSet> preimage_set(const CochainComplex& c, const Cochain& z, Backend backend)
{
    const PrimeField f = c.field();
    if (z.coords.size() != c.dim(z.degree))
        throw Error(ErrorCode::dimension_mismatch, "cochain does not match degree " + std::to_string(z.degree));
    if (!is_zero(c.differential(z.degree).apply(z.coords)))
        throw Error(ErrorCode::not_a_cycle, "d^" + std::to_string(z.degree) + " z != 0");
    const Matrix d = c.differential(z.degree - 1);
    if (d.cols() == 0) {
        if (!is_zero(z.coords))
            return std::nullopt;
        return AffineSolutionSet(f, {}, {});
    }
    return solve_affine(d, z.coords, backend);
}

} // namespace homcert
