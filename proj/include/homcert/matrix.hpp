#pragma once

#include "homcert/field.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace homcert {

struct Entry {
    std::uint32_t col;
    Scalar value;

    friend bool operator==(const Entry&, const Entry&) = default;
};

struct Triplet {
    std::size_t row;
    std::size_t col;
    Scalar value;
};

/// Sparse matrix over F_p in compressed-row form.
///
/// Rows are sorted by column and never store a zero. Instances are immutable;
/// build them through the named constructors.
class Matrix {
public:
    Matrix(PrimeField field, std::size_t rows, std::size_t cols);

    static Matrix identity(PrimeField field, std::size_t n);
    /// Row-major dense input of size rows*cols; entries are taken mod p.
    static Matrix from_dense(PrimeField field, std::size_t rows, std::size_t cols, std::span<const std::int64_t> values);
    static Matrix from_dense_scalars(PrimeField field, std::size_t rows, std::size_t cols, std::span<const Scalar> values);
    /// Duplicate positions are summed.
    static Matrix from_triplets(PrimeField field, std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
    static Matrix from_columns(PrimeField field, std::size_t rows, std::span<const Vec> columns);
    static Matrix from_rows(PrimeField field, std::size_t cols, std::span<const Vec> rows);

    static Matrix vstack(std::span<const Matrix> blocks);
    static Matrix hstack(std::span<const Matrix> blocks);
    static Matrix block_diagonal(std::span<const Matrix> blocks);
    static Matrix kron(const Matrix& a, const Matrix& b);

    PrimeField field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return entries_.size(); }
    bool is_zero() const noexcept { return entries_.empty(); }

    std::span<const Entry> row(std::size_t r) const
    {
        return {entries_.data() + row_ptr_[r], entries_.data() + row_ptr_[r + 1]};
    }
    Scalar at(std::size_t r, std::size_t c) const;

    Vec apply(std::span<const Scalar> v) const;
    Vec column(std::size_t c) const;
    Vec dense_row(std::size_t r) const;
    std::vector<Scalar> to_dense() const;

    Matrix transpose() const;
    Matrix scaled(Scalar s) const;
    Matrix select_rows(std::span<const std::size_t> rows) const;
    Matrix select_columns(std::span<const std::size_t> cols) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend bool operator==(const Matrix& a, const Matrix& b);

private:
    Matrix(PrimeField field, std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr, std::vector<Entry> entries);

    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::size_t> row_ptr_;
    std::vector<Entry> entries_;
};

// Dense vector helpers.
Vec zero_vec(std::size_t n);
Vec unit_vec(std::size_t n, std::size_t i);
bool is_zero(std::span<const Scalar> v) noexcept;
Vec add(const PrimeField& f, std::span<const Scalar> a, std::span<const Scalar> b);
Vec sub(const PrimeField& f, std::span<const Scalar> a, std::span<const Scalar> b);
Vec scale(const PrimeField& f, Scalar s, std::span<const Scalar> a);
/// y += s * x
void axpy(const PrimeField& f, Scalar s, std::span<const Scalar> x, std::span<Scalar> y);
Vec kron(const PrimeField& f, std::span<const Scalar> a, std::span<const Scalar> b);
Scalar dot(const PrimeField& f, std::span<const Scalar> a, std::span<const Scalar> b);

} // namespace homcert
