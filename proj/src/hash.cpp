#include "homcert/hash.hpp"

#include "homcert/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <memory>

namespace homcert {

namespace {

void put_u64(std::string& out, std::uint64_t v)
{
    for (int k = 0; k < 8; ++k)
        out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v)
{
    for (int k = 0; k < 4; ++k)
        out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

} // namespace

std::string sha256_hex(std::string_view bytes)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1
        || EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
        throw Error(ErrorCode::invalid_argument, "SHA-256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; ++k) {
        out.push_back(hex[digest[k] >> 4]);
        out.push_back(hex[digest[k] & 0xf]);
    }
    return out;
}

std::string hash_matrix(const Matrix& m)
{
    std::string bytes = "matrix";
    put_u32(bytes, m.field().p());
    put_u64(bytes, m.rows());
    put_u64(bytes, m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        put_u64(bytes, row.size());
        for (const auto& e : row) {
            put_u32(bytes, e.col);
            put_u32(bytes, e.value);
        }
    }
    return sha256_hex(bytes);
}

std::string hash_vector(const PrimeField& f, std::span<const Scalar> v)
{
    std::string bytes = "vector";
    put_u32(bytes, f.p());
    put_u64(bytes, v.size());
    for (Scalar x : v)
        put_u32(bytes, x);
    return sha256_hex(bytes);
}

} // namespace homcert
