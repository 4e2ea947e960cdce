#include "homcert/field.hpp"

#include "homcert/error.hpp"

#include <string>

namespace homcert {

bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p)
{
    if (p > max_characteristic || !is_prime(p))
        throw Error(ErrorCode::validation_error, "field characteristic " + std::to_string(p) + " is not a supported prime");
}

Scalar PrimeField::inv(Scalar a) const
{
    if (a == 0)
        throw Error(ErrorCode::invalid_argument, "inverse of zero in F_" + std::to_string(p_));
    // extended Euclid on (a, p)
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p_, new_r = a;
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    return from_int(t);
}

Scalar PrimeField::from_int(std::int64_t v) const noexcept
{
    std::int64_t m = v % static_cast<std::int64_t>(p_);
    if (m < 0)
        m += p_;
    return static_cast<Scalar>(m);
}

} // namespace homcert
