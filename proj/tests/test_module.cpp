#include "homcert/baer.hpp"
#include "homcert/error.hpp"
#include "homcert/linalg.hpp"
#include "homcert/module.hpp"

#include "doctest.h"

#include <cmath>

using namespace homcert;

namespace {

const PrimeField f2(2), f3(3);

// An element of E outside m E; it generates E as an R-module.
Vec top_element(const FDModule& e)
{
    std::vector<Vec> me;
    for (const auto& m : e.algebra().maxideal_basis())
        for (std::size_t k = 0; k < e.dim(); ++k)
            me.push_back(e.act(m, unit_vec(e.dim(), k)));
    const auto span = row_space_basis(e.field(), e.dim(), me);
    for (std::size_t k = 0; k < e.dim(); ++k) {
        Vec v = unit_vec(e.dim(), k);
        reduce_modulo(e.field(), v, span);
        if (!is_zero(v))
            return unit_vec(e.dim(), k);
    }
    FAIL("E = m E");
    return {};
}

// Number of k-linear maps commuting with every basis action, by brute force.
std::size_t count_module_maps(const FDModule& s, const FDModule& t)
{
    const std::uint32_t p = s.field().p();
    const std::size_t cells = s.dim() * t.dim();
    std::size_t total = 1;
    for (std::size_t k = 0; k < cells; ++k)
        total *= p;
    std::size_t count = 0;
    std::vector<std::int64_t> x(cells, 0);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (auto& v : x) {
            v = static_cast<std::int64_t>(c % p);
            c /= p;
        }
        if (is_module_map(s, t, Matrix::from_dense(s.field(), t.dim(), s.dim(), x)))
            ++count;
    }
    return count;
}

std::size_t log_p(std::size_t n, std::uint32_t p)
{
    std::size_t e = 0;
    while (n > 1) {
        n /= p;
        ++e;
    }
    return e;
}

} // namespace

TEST_CASE("residue modules")
{
    for (const auto& a : {truncated_polynomial_algebra(f2, 2), truncated_polynomial_algebra(f3, 3),
                          tensor_power(truncated_polynomial_algebra(f2, 2), 2)}) {
        const FDModule k = residue_module(a);
        CHECK(k.dim() == 1);
        for (const auto& m : a.maxideal_basis())
            CHECK(k.action_of(m).is_zero());
    }
}

TEST_CASE("Matlis duals")
{
    const auto a = truncated_polynomial_algebra(f2, 2);
    const FDModule e = matlis_dual(regular_module(a));
    CHECK(e.dim() == 2);
    CHECK(socle(e).size() == 1);
    CHECK(matlis_dual(residue_module(a)) == residue_module(a));

    const auto b = truncated_polynomial_algebra(f3, 3);
    const FDModule eb = matlis_dual(regular_module(b));
    CHECK(eb.dim() == 3);
    const auto s = socle(eb);
    REQUIRE(s.size() == 1);
    // the socle of Hom_k(R, k) is spanned by the functional vanishing on m
    CHECK(row_space_basis(f3, 3, s) == std::vector<Vec>{b.residue_functional()});

    // M** = M
    for (const auto& m : {regular_module(b), residue_module(b), free_module(b, 2), injective_envelope(tensor_power(a, 2)),
                          direct_sum(std::vector<FDModule>{eb, residue_module(b)})})
        CHECK(matlis_dual(matlis_dual(m)) == m);
}

TEST_CASE("socles")
{
    const auto a = truncated_polynomial_algebra(f2, 2);
    CHECK(socle(regular_module(a)) == std::vector<Vec>{{0, 1}});
    const auto r2 = tensor_power(a, 2);
    CHECK(socle(regular_module(r2)) == std::vector<Vec>{{0, 0, 0, 1}});
    CHECK(socle(residue_module(r2)).size() == 1);
    CHECK(socle(free_module(a, 3)).size() == 3);
}

TEST_CASE("tensor products of modules")
{
    const auto a = truncated_polynomial_algebra(f2, 2);
    const FDModule e = injective_envelope(a);
    const FDModule ee = tensor_module(e, e);
    CHECK(ee.dim() == 4);
    CHECK(socle(ee).size() == 1);

    const FDModule with_unit = tensor_module(e, residue_module(ground_field_algebra(f2)));
    CHECK(with_unit.dim() == e.dim());
    for (std::size_t u = 0; u < a.dim(); ++u)
        CHECK(with_unit.action(u) == e.action(u));

    const FDModule kk = tensor_module(residue_module(a), residue_module(a));
    CHECK(kk == residue_module(tensor_algebra(a, a)));
}

TEST_CASE("annihilation profiles in E (x) E")
{
    const auto a = truncated_polynomial_algebra(f2, 2);
    const FDModule e = injective_envelope(a);
    const FDModule ee = tensor_module(e, e);
    const std::vector<AlgebraMorphism> phi{factor_embedding(a, 2, 1), factor_embedding(a, 2, 2)};

    // E is free of rank one on a top element g; identify 1 with g and x with x g.
    const Vec one = top_element(e);
    const Vec x = e.act(a.maxideal_basis()[0], one);
    CHECK(socle(e) == std::vector<Vec>{x});

    const Vec x1 = kron(f2, x, one), xy = kron(f2, x, x), ones = kron(f2, one, one);
    CHECK(annihilation_profile(ee, x1, phi).active_factors == std::set<std::size_t>{2});
    CHECK(annihilation_profile(ee, xy, phi).active_factors.empty());
    CHECK(annihilation_profile(ee, ones, phi).active_factors == std::set<std::size_t>{1, 2});
}

TEST_CASE("Baer criterion on small rings")
{
    const auto a = truncated_polynomial_algebra(f2, 2);
    CHECK(enumerate_ideals(a, 100).size() == 3);

    const BaerReport e = baer_injectivity_test(injective_envelope(a), a);
    CHECK(e.injective);
    CHECK(e.ideals_checked == 3);

    const BaerReport k = baer_injectivity_test(residue_module(a), a);
    CHECK_FALSE(k.injective);
    REQUIRE(k.witness);
    CHECK(k.witness->ideal_basis.size() == 1);

    const auto r2 = tensor_power(a, 2);
    const BaerReport ee = baer_injectivity_test(tensor_module(injective_envelope(a), injective_envelope(a)), r2);
    CHECK(ee.injective);
    CHECK(ee.ideals_checked == enumerate_ideals(r2, 1000).size());

    CHECK_FALSE(baer_injectivity_test(regular_module(square_zero_algebra(f2, 2)), square_zero_algebra(f2, 2)).injective);
    CHECK(baer_injectivity_test(regular_module(truncated_polynomial_algebra(f3, 3)), truncated_polynomial_algebra(f3, 3)).injective);

    BaerBudget tiny;
    tiny.max_ideals = 2;
    CHECK_THROWS_AS(baer_injectivity_test(injective_envelope(a), a, tiny), Error);
}

TEST_CASE("essential over the socle")
{
    const auto a = truncated_polynomial_algebra(f2, 2);
    const FDModule e = injective_envelope(a);
    CHECK(is_essential_over_socle(e));
    CHECK_FALSE(is_essential_over_socle(direct_sum(std::vector<FDModule>{e, e})));
    const auto s = truncated_polynomial_algebra(f2, 4);
    CHECK(is_essential_over_socle(tensor_module(e, injective_envelope(s))));
}

TEST_CASE("Hom spaces match brute force")
{
    const auto a = truncated_polynomial_algebra(f2, 2);
    const auto b = truncated_polynomial_algebra(f3, 3);
    const std::vector<std::pair<FDModule, FDModule>> pairs{
        {regular_module(a), regular_module(a)},
        {residue_module(a), injective_envelope(a)},
        {injective_envelope(a), residue_module(a)},
        {free_module(a, 2), injective_envelope(a)},
        {injective_envelope(a), free_module(a, 2)},
        {residue_module(b), regular_module(b)},
        {regular_module(b), residue_module(b)},
        {injective_envelope(b), injective_envelope(b)},
    };
    for (const auto& [s, t] : pairs) {
        const auto basis = hom_space(s, t);
        CHECK(basis.size() == log_p(count_module_maps(s, t), s.field().p()));
        for (const auto& m : basis)
            CHECK(is_module_map(s, t, m));
    }
}

TEST_CASE("the envelope of a tensor product is the tensor product of envelopes")
{
    const auto r = truncated_polynomial_algebra(f2, 2);
    const auto s = truncated_polynomial_algebra(f2, 4);
    const FDModule et = tensor_module(injective_envelope(r), injective_envelope(s));
    CHECK(et.dim() == 8);
    CHECK(socle(et).size() == 1);
    const auto iso = find_isomorphism(injective_envelope(et.algebra()), et);
    REQUIRE(iso);
    CHECK(rank(*iso) == 8);
    CHECK(is_module_map(injective_envelope(et.algebra()), et, *iso));

    CHECK_FALSE(find_isomorphism(regular_module(r), direct_sum(std::vector<FDModule>{residue_module(r), residue_module(r)})));
}

TEST_CASE("quotients")
{
    const auto a = truncated_polynomial_algebra(f3, 3);
    const FDModule r = regular_module(a);
    const Quotient q = quotient_module(r, socle(r));
    CHECK(q.module.dim() == 2);
    CHECK(is_module_map(r, q.module, q.projection));
    CHECK(is_zero(q.projection.apply(socle(r)[0])));
    CHECK(matlis_dual(q.module).dim() == 2);
}
