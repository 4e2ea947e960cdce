#pragma once

#include <cstdint>
#include <vector>

namespace homcert {

using Scalar = std::uint32_t;
using Vec = std::vector<Scalar>;

bool is_prime(std::uint64_t n) noexcept;

/// Arithmetic in F_p. Elements are canonical representatives in [0, p).
class PrimeField {
public:
    static constexpr std::uint32_t max_characteristic = 2147483647u;

    /// Throws Error(validation_error) unless p is a prime no larger than 2^31 - 1.
    explicit PrimeField(std::uint32_t p);

    std::uint32_t p() const noexcept { return p_; }

    Scalar add(Scalar a, Scalar b) const noexcept
    {
        std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Scalar sub(Scalar a, Scalar b) const noexcept { return a >= b ? a - b : a + (p_ - b); }
    Scalar neg(Scalar a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Scalar mul(Scalar a, Scalar b) const noexcept
    {
        return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    /// a - f*b, the elimination kernel.
    Scalar sub_mul(Scalar a, Scalar f, Scalar b) const noexcept { return sub(a, mul(f, b)); }
    Scalar inv(Scalar a) const;
    Scalar from_int(std::int64_t v) const noexcept;
    /// (-1)^k as a field element.
    Scalar sign(long long k) const noexcept { return (k % 2 == 0) ? 1 : neg(1); }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t p_;
};

} // namespace homcert
