#include "homcert/matrix.hpp"

#include "homcert/error.hpp"

#include <algorithm>
#include <string>

namespace homcert {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw Error(ErrorCode::dimension_mismatch, what);
}

} // namespace

Matrix::Matrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), row_ptr_(rows + 1, 0)
{
}

Matrix::Matrix(PrimeField field, std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr, std::vector<Entry> entries)
    : field_(field), rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), entries_(std::move(entries))
{
}

Matrix Matrix::identity(PrimeField field, std::size_t n)
{
    std::vector<std::size_t> ptr(n + 1);
    std::vector<Entry> e(n);
    for (std::size_t i = 0; i < n; ++i) {
        ptr[i] = i;
        e[i] = {static_cast<std::uint32_t>(i), 1};
    }
    ptr[n] = n;
    return Matrix(field, n, n, std::move(ptr), std::move(e));
}

Matrix Matrix::from_dense(PrimeField field, std::size_t rows, std::size_t cols, std::span<const std::int64_t> values)
{
    require(values.size() == rows * cols, "dense data does not match shape");
    std::vector<Scalar> s(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        s[i] = field.from_int(values[i]);
    return from_dense_scalars(field, rows, cols, s);
}

Matrix Matrix::from_dense_scalars(PrimeField field, std::size_t rows, std::size_t cols, std::span<const Scalar> values)
{
    require(values.size() == rows * cols, "dense data does not match shape");
    std::vector<std::size_t> ptr(rows + 1, 0);
    std::vector<Entry> e;
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            Scalar v = values[r * cols + c] % field.p();
            if (v != 0)
                e.push_back({static_cast<std::uint32_t>(c), v});
        }
        ptr[r + 1] = e.size();
    }
    return Matrix(field, rows, cols, std::move(ptr), std::move(e));
}

Matrix Matrix::from_triplets(PrimeField field, std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
{
    for (const auto& t : triplets)
        require(t.row < rows && t.col < cols, "triplet index out of range");
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<std::size_t> ptr(rows + 1, 0);
    std::vector<Entry> e;
    e.reserve(triplets.size());
    std::size_t i = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        while (i < triplets.size() && triplets[i].row == r) {
            std::size_t c = triplets[i].col;
            Scalar acc = 0;
            while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
                acc = field.add(acc, triplets[i].value % field.p());
                ++i;
            }
            if (acc != 0)
                e.push_back({static_cast<std::uint32_t>(c), acc});
        }
        ptr[r + 1] = e.size();
    }
    return Matrix(field, rows, cols, std::move(ptr), std::move(e));
}

Matrix Matrix::from_columns(PrimeField field, std::size_t rows, std::span<const Vec> columns)
{
    std::vector<Triplet> t;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        require(columns[c].size() == rows, "column length mismatch");
        for (std::size_t r = 0; r < rows; ++r)
            if (columns[c][r] != 0)
                t.push_back({r, c, columns[c][r]});
    }
    return from_triplets(field, rows, columns.size(), std::move(t));
}

Matrix Matrix::from_rows(PrimeField field, std::size_t cols, std::span<const Vec> rows)
{
    std::vector<std::size_t> ptr(rows.size() + 1, 0);
    std::vector<Entry> e;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        require(rows[r].size() == cols, "row length mismatch");
        for (std::size_t c = 0; c < cols; ++c) {
            Scalar v = rows[r][c] % field.p();
            if (v != 0)
                e.push_back({static_cast<std::uint32_t>(c), v});
        }
        ptr[r + 1] = e.size();
    }
    return Matrix(field, rows.size(), cols, std::move(ptr), std::move(e));
}

Matrix Matrix::vstack(std::span<const Matrix> blocks)
{
    require(!blocks.empty(), "vstack of no blocks");
    const std::size_t cols = blocks.front().cols();
    std::size_t rows = 0;
    for (const auto& b : blocks) {
        require(b.cols() == cols, "vstack column mismatch");
        rows += b.rows();
    }
    std::vector<std::size_t> ptr;
    ptr.reserve(rows + 1);
    ptr.push_back(0);
    std::vector<Entry> e;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r) {
            auto row = b.row(r);
            e.insert(e.end(), row.begin(), row.end());
            ptr.push_back(e.size());
        }
    }
    return Matrix(blocks.front().field(), rows, cols, std::move(ptr), std::move(e));
}

Matrix Matrix::hstack(std::span<const Matrix> blocks)
{
    require(!blocks.empty(), "hstack of no blocks");
    const std::size_t rows = blocks.front().rows();
    std::size_t cols = 0;
    for (const auto& b : blocks) {
        require(b.rows() == rows, "hstack row mismatch");
        cols += b.cols();
    }
    std::vector<std::size_t> ptr(rows + 1, 0);
    std::vector<Entry> e;
    for (std::size_t r = 0; r < rows; ++r) {
        std::uint32_t offset = 0;
        for (const auto& b : blocks) {
            for (const auto& x : b.row(r))
                e.push_back({x.col + offset, x.value});
            offset += static_cast<std::uint32_t>(b.cols());
        }
        ptr[r + 1] = e.size();
    }
    return Matrix(blocks.front().field(), rows, cols, std::move(ptr), std::move(e));
}

Matrix Matrix::block_diagonal(std::span<const Matrix> blocks)
{
    require(!blocks.empty(), "block_diagonal of no blocks");
    std::size_t rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    std::vector<std::size_t> ptr;
    ptr.reserve(rows + 1);
    ptr.push_back(0);
    std::vector<Entry> e;
    std::uint32_t offset = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r) {
            for (const auto& x : b.row(r))
                e.push_back({x.col + offset, x.value});
            ptr.push_back(e.size());
        }
        offset += static_cast<std::uint32_t>(b.cols());
    }
    return Matrix(blocks.front().field(), rows, cols, std::move(ptr), std::move(e));
}

Matrix Matrix::kron(const Matrix& a, const Matrix& b)
{
    if (a.field() != b.field())
        throw Error(ErrorCode::field_mismatch, "kron of matrices over different fields");
    const PrimeField f = a.field();
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    std::vector<std::size_t> ptr;
    ptr.reserve(rows + 1);
    ptr.push_back(0);
    std::vector<Entry> e;
    e.reserve(a.nnz() * b.nnz());
    for (std::size_t ra = 0; ra < a.rows(); ++ra) {
        for (std::size_t rb = 0; rb < b.rows(); ++rb) {
            for (const auto& xa : a.row(ra))
                for (const auto& xb : b.row(rb))
                    e.push_back({static_cast<std::uint32_t>(xa.col * b.cols() + xb.col), f.mul(xa.value, xb.value)});
            ptr.push_back(e.size());
        }
    }
    return Matrix(f, rows, cols, std::move(ptr), std::move(e));
}

Scalar Matrix::at(std::size_t r, std::size_t c) const
{
    if (r >= rows_ || c >= cols_)
        throw Error(ErrorCode::index_out_of_range, "matrix index out of range");
    auto rw = row(r);
    auto it = std::lower_bound(rw.begin(), rw.end(), c, [](const Entry& e, std::size_t col) { return e.col < col; });
    return (it != rw.end() && it->col == c) ? it->value : 0;
}

Vec Matrix::apply(std::span<const Scalar> v) const
{
    require(v.size() == cols_, "matrix-vector dimension mismatch");
    Vec out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::uint64_t acc = 0;
        for (const auto& e : row(r)) {
            acc += static_cast<std::uint64_t>(e.value) * v[e.col];
            if (acc >= (1ull << 62))
                acc %= field_.p();
        }
        out[r] = static_cast<Scalar>(acc % field_.p());
    }
    return out;
}

Vec Matrix::column(std::size_t c) const
{
    Vec out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r)
        out[r] = at(r, c);
    return out;
}

Vec Matrix::dense_row(std::size_t r) const
{
    Vec out(cols_, 0);
    for (const auto& e : row(r))
        out[e.col] = e.value;
    return out;
}

std::vector<Scalar> Matrix::to_dense() const
{
    std::vector<Scalar> out(rows_ * cols_, 0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& e : row(r))
            out[r * cols_ + e.col] = e.value;
    return out;
}

Matrix Matrix::transpose() const
{
    std::vector<std::size_t> count(cols_ + 1, 0);
    for (const auto& e : entries_)
        ++count[e.col + 1];
    for (std::size_t c = 0; c < cols_; ++c)
        count[c + 1] += count[c];
    std::vector<Entry> e(entries_.size());
    std::vector<std::size_t> next(count.begin(), count.end() - 1);
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& x : row(r))
            e[next[x.col]++] = {static_cast<std::uint32_t>(r), x.value};
    return Matrix(field_, cols_, rows_, std::move(count), std::move(e));
}

Matrix Matrix::scaled(Scalar s) const
{
    s %= field_.p();
    if (s == 0)
        return Matrix(field_, rows_, cols_);
    std::vector<Entry> e = entries_;
    for (auto& x : e)
        x.value = field_.mul(x.value, s);
    return Matrix(field_, rows_, cols_, row_ptr_, std::move(e));
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const
{
    std::vector<std::size_t> ptr(rows.size() + 1, 0);
    std::vector<Entry> e;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= rows_)
            throw Error(ErrorCode::index_out_of_range, "row selection out of range");
        auto rw = row(rows[i]);
        e.insert(e.end(), rw.begin(), rw.end());
        ptr[i + 1] = e.size();
    }
    return Matrix(field_, rows.size(), cols_, std::move(ptr), std::move(e));
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const
{
    constexpr std::uint32_t absent = UINT32_MAX;
    std::vector<std::uint32_t> remap(cols_, absent);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] >= cols_)
            throw Error(ErrorCode::index_out_of_range, "column selection out of range");
        remap[cols[i]] = static_cast<std::uint32_t>(i);
    }
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& x : row(r))
            if (remap[x.col] != absent)
                t.push_back({r, remap[x.col], x.value});
    return from_triplets(field_, rows_, cols.size(), std::move(t));
}

Matrix operator*(const Matrix& a, const Matrix& b)
{
    if (a.field() != b.field())
        throw Error(ErrorCode::field_mismatch, "product of matrices over different fields");
    require(a.cols() == b.rows(), "matrix product dimension mismatch");
    const PrimeField f = a.field();
    std::vector<std::size_t> ptr(a.rows() + 1, 0);
    std::vector<Entry> e;
    Vec acc(b.cols(), 0);
    std::vector<std::uint32_t> touched;
    std::vector<char> mark(b.cols(), 0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        touched.clear();
        for (const auto& xa : a.row(r)) {
            for (const auto& xb : b.row(xa.col)) {
                if (!mark[xb.col]) {
                    mark[xb.col] = 1;
                    touched.push_back(xb.col);
                }
                acc[xb.col] = f.add(acc[xb.col], f.mul(xa.value, xb.value));
            }
        }
        std::sort(touched.begin(), touched.end());
        for (auto c : touched) {
            if (acc[c] != 0)
                e.push_back({c, acc[c]});
            acc[c] = 0;
            mark[c] = 0;
        }
        ptr[r + 1] = e.size();
    }
    return Matrix(f, a.rows(), b.cols(), std::move(ptr), std::move(e));
}

namespace {

Matrix combine(const Matrix& a, const Matrix& b, bool subtract)
{
    if (a.field() != b.field())
        throw Error(ErrorCode::field_mismatch, "sum of matrices over different fields");
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum dimension mismatch");
    const PrimeField f = a.field();
    std::vector<Triplet> t;
    t.reserve(a.nnz() + b.nnz());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (const auto& x : a.row(r))
            t.push_back({r, x.col, x.value});
        for (const auto& x : b.row(r))
            t.push_back({r, x.col, subtract ? f.neg(x.value) : x.value});
    }
    return Matrix::from_triplets(f, a.rows(), a.cols(), std::move(t));
}

} // namespace

Matrix operator+(const Matrix& a, const Matrix& b) { return combine(a, b, false); }
Matrix operator-(const Matrix& a, const Matrix& b) { return combine(a, b, true); }

bool operator==(const Matrix& a, const Matrix& b)
{
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.row_ptr_ == b.row_ptr_ && a.entries_ == b.entries_;
}

Vec zero_vec(std::size_t n) { return Vec(n, 0); }

Vec unit_vec(std::size_t n, std::size_t i)
{
    Vec v(n, 0);
    v.at(i) = 1;
    return v;
}

bool is_zero(std::span<const Scalar> v) noexcept
{
    return std::all_of(v.begin(), v.end(), [](Scalar s) { return s == 0; });
}

Vec add(const PrimeField& f, std::span<const Scalar> a, std::span<const Scalar> b)
{
    require(a.size() == b.size(), "vector sum dimension mismatch");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = f.add(a[i], b[i]);
    return out;
}

Vec sub(const PrimeField& f, std::span<const Scalar> a, std::span<const Scalar> b)
{
    require(a.size() == b.size(), "vector difference dimension mismatch");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = f.sub(a[i], b[i]);
    return out;
}

Vec scale(const PrimeField& f, Scalar s, std::span<const Scalar> a)
{
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = f.mul(s, a[i]);
    return out;
}

void axpy(const PrimeField& f, Scalar s, std::span<const Scalar> x, std::span<Scalar> y)
{
    require(x.size() == y.size(), "axpy dimension mismatch");
    if (s == 0)
        return;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0)
            y[i] = f.add(y[i], f.mul(s, x[i]));
}

Vec kron(const PrimeField& f, std::span<const Scalar> a, std::span<const Scalar> b)
{
    Vec out(a.size() * b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i * b.size() + j] = f.mul(a[i], b[j]);
    }
    return out;
}

Scalar dot(const PrimeField& f, std::span<const Scalar> a, std::span<const Scalar> b)
{
    require(a.size() == b.size(), "dot product dimension mismatch");
    Scalar acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc = f.add(acc, f.mul(a[i], b[i]));
    return acc;
}

} // namespace homcert
