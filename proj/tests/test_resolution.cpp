#include "homcert/error.hpp"
#include "homcert/stage.hpp"

#include "doctest.h"

using namespace homcert;

namespace {

const PrimeField f2(2), f3(3);

Vec monomial(const FiniteDimAlgebra& a, std::size_t k) { return unit_vec(a.dim(), k); }

// The augmented complex P_L -> ... -> P_0 -> M is exact except at P_L.
void check_exact(const FreeResolution& p)
{
    const std::size_t len = p.length();
    CHECK(rank(p.augmentation) == p.module.dim());
    // ker(augmentation) = im d_1
    CHECK(p.term(0).dim() - rank(p.augmentation) == rank(p.differentials[0]));
    for (std::size_t j = 1; j < len; ++j) {
        // ker d_j = im d_{j+1}
        CHECK(p.term(j).dim() - rank(p.differentials[j - 1]) == rank(p.differentials[j]));
        const Matrix& dj = p.differentials[j - 1];
        const Matrix& dj1 = p.differentials[j];
        for (std::size_t c = 0; c < dj1.cols(); ++c)
            CHECK(is_zero(dj.apply(dj1.column(c))));
    }
}

} // namespace

TEST_CASE("resolution of k over F_2[x]/(x^2)")
{
    const auto a = truncated_polynomial_algebra(f2, 2);
    const FreeResolution p = minimal_free_resolution(residue_module(a), 3);
    CHECK(p.ranks == std::vector<std::size_t>{1, 1, 1, 1});
    for (const auto& e : p.entries)
        CHECK(e[0][0] == monomial(a, 1));
    CHECK(p.is_minimal());
    check_exact(p);
}

TEST_CASE("resolution of k over F_3[x]/(x^3) alternates x and x^2")
{
    const auto a = truncated_polynomial_algebra(f3, 3);
    const FreeResolution p = minimal_free_resolution(residue_module(a), 3);
    CHECK(p.ranks == std::vector<std::size_t>{1, 1, 1, 1});
    REQUIRE(p.entries.size() == 3);
    const PrimeField& f = a.field();
    auto proportional = [&](const Vec& v, const Vec& w) {
        for (Scalar s = 1; s < f.p(); ++s)
            if (scale(f, s, w) == v)
                return true;
        return false;
    };
    CHECK(proportional(p.entries[0][0][0], monomial(a, 1)));
    CHECK(proportional(p.entries[1][0][0], monomial(a, 2)));
    CHECK(proportional(p.entries[2][0][0], monomial(a, 1)));
    check_exact(p);
}

TEST_CASE("resolution of k over F_2[x, y]/(x^2, y^2)")
{
    const auto r2 = tensor_power(truncated_polynomial_algebra(f2, 2), 2);
    const FreeResolution p = minimal_free_resolution(residue_module(r2), 2);
    CHECK(p.ranks == std::vector<std::size_t>{1, 2, 3});
    CHECK(p.is_minimal());
    check_exact(p);
    const Vec eps = r2.residue_functional();
    for (const auto& d : p.entries)
        for (const auto& row : d)
            for (const auto& entry : row)
                CHECK(dot(f2, eps, entry) == 0);
}

TEST_CASE("minimality across presets")
{
    const std::vector<FiniteDimAlgebra> rings{truncated_polynomial_algebra(f2, 2), truncated_polynomial_algebra(f3, 3),
                                              truncated_polynomial_algebra(f2, 4), square_zero_algebra(f2, 2),
                                              tensor_power(truncated_polynomial_algebra(f2, 2), 2)};
    for (const auto& a : rings) {
        const FreeResolution p = minimal_free_resolution(residue_module(a), 4);
        CHECK(p.is_minimal());
        check_exact(p);
    }
    CHECK(minimal_free_resolution(residue_module(square_zero_algebra(f2, 2)), 4).ranks
          == std::vector<std::size_t>{1, 2, 4, 8, 16});
    CHECK_THROWS_AS(minimal_free_resolution(residue_module(truncated_polynomial_algebra(f2, 2)), 0), Error);
}

TEST_CASE("dual injective resolutions")
{
    const auto a = truncated_polynomial_algebra(f2, 2);
    const ResidueResolution r = resolve_residue_field(a, 4);
    const CochainComplex& i = r.injective.complex;
    for (int j = 0; j <= 4; ++j) {
        CHECK(i.dim(j) == 2);
        CHECK(i.module(j) == injective_envelope(a));
    }
    for (int j = 0; j < 4; ++j)
        CHECK(i.differential(j) == injective_envelope(a).action(1));
    CHECK(cohomology_dim(i, 0) == 1);
    for (int j = 1; j <= 3; ++j)
        CHECK(cohomology_dim(i, j) == 0);

    const auto b = truncated_polynomial_algebra(f3, 3);
    const ResidueResolution rb = resolve_residue_field(b, 4);
    const FDModule eb = injective_envelope(b);
    auto is_multiple_of = [&](const Matrix& m, const Matrix& by) {
        for (Scalar s = 1; s < 3; ++s)
            if (m == by.scaled(s))
                return true;
        return false;
    };
    CHECK(is_multiple_of(rb.injective.complex.differential(0), eb.action(1)));
    CHECK(is_multiple_of(rb.injective.complex.differential(1), eb.action(2)));
    CHECK(cohomology_dim(rb.injective.complex, 0) == 1);
    for (int j = 1; j <= 3; ++j)
        CHECK(cohomology_dim(rb.injective.complex, j) == 0);

    CHECK_THROWS_AS(dualize_to_injective_resolution(r.free, regular_module(a)), Error);
}

TEST_CASE("choice of a and b")
{
    for (const auto& a : {truncated_polynomial_algebra(f2, 2), truncated_polynomial_algebra(f3, 3), square_zero_algebra(f2, 2)}) {
        const ResidueResolution r = resolve_residue_field(a, 2);
        const CochainComplex& i = r.injective.complex;
        const Vec va = choose_a(r.injective);
        const Vec vb = choose_b(r.injective);
        CHECK_FALSE(is_zero(va));
        CHECK_FALSE(is_zero(vb));
        CHECK(is_zero(i.differential(0).apply(va)));
        for (const auto& m : a.maxideal_basis()) {
            CHECK(is_zero(i.module(0).act(m, va)));
            CHECK(is_zero(i.module(1).act(m, vb)));
        }
        // a spans the image of k -> I^0
        std::vector<Vec> image{r.injective.coaugmentation.column(0)};
        CHECK(row_space_basis(a.field(), i.dim(0), image) == std::vector<Vec>{va});
    }

    const auto k = ground_field_algebra(f2);
    const ResidueResolution r = resolve_residue_field(k, 2);
    CHECK(r.free.ranks == std::vector<std::size_t>{1, 0, 0});
    CHECK_NOTHROW(choose_a(r.injective));
    try {
        choose_b(r.injective);
        FAIL("k over k passed the hypothesis guard");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::projective_residue);
    }
}
