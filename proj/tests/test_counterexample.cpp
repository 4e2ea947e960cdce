#include "homcert/error.hpp"
#include "homcert/hash.hpp"
#include "homcert/stage.hpp"

#include "doctest.h"

#include <chrono>
#include <set>

using namespace homcert;

namespace {

const PrimeField f2(2);

std::size_t binomial(std::size_t n, std::size_t k)
{
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

template <class F>
ErrorCode code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::invalid_argument;
}

struct Stage {
    ResidueResolution res;
    StageData data;
};

Stage make_stage(const FiniteDimAlgebra& r1, std::size_t i, const StageOptions& opt = {})
{
    ResidueResolution res = resolve_residue_field(r1, i + 1);
    StageData data = build_stage(res, i, choose_a(res.injective), choose_b(res.injective), opt);
    return {std::move(res), std::move(data)};
}

} // namespace

TEST_CASE("stage 1 over F_2[x]/(x^2) against brute force")
{
    const auto r1 = truncated_polynomial_algebra(f2, 2);
    const Stage s = make_stage(r1, 1);
    CHECK(s.data.n == 2);
    CHECK(s.data.s_i == std::vector<std::size_t>{2});
    CHECK(s.data.window->dim(1) == 8);

    // the same cochain and complex through the module-level tensor product
    const CochainComplex& i = s.res.injective.complex;
    const MultiIndexedComplex j = tensor_power(i, 2, 3);
    const int idx[] = {0, 1};
    const Summand& sm = j.summand(idx);
    Vec lambda(j.complex.dim(1), 0);
    const Vec ab = kron(f2, s.data.a, s.data.b);
    std::copy(ab.begin(), ab.end(), lambda.begin() + static_cast<std::ptrdiff_t>(sm.offset));
    CHECK(lambda == s.data.lambda.coords);

    // all 16 cochains of degree 0: exactly two hit lambda, and y moves both
    const Matrix y = j.complex.module(0).action_of(factor_embedding(r1, 2, 2).apply(r1.maxideal_basis()[0]));
    std::vector<Vec> preimages;
    for (std::size_t code = 0; code < 16; ++code) {
        Vec mu(4);
        for (std::size_t k = 0; k < 4; ++k)
            mu[k] = (code >> k) & 1;
        if (j.complex.differential(0).apply(mu) == lambda)
            preimages.push_back(mu);
    }
    REQUIRE(preimages.size() == 2);
    for (const auto& mu : preimages)
        CHECK_FALSE(is_zero(y.apply(mu)));

    const StageCertificate c = verify_stage(s.data);
    CHECK(c.all_ok());
    CHECK(c.lambda_diagram == "a | b");
    CHECK(c.boundary_dim == 1);
    REQUIRE(c.candidate_count);
    CHECK(*c.candidate_count == 2);
    REQUIRE(c.witnesses.size() == 2);
    std::set<std::string> hashes;
    for (const auto& mu : preimages)
        hashes.insert(hash_vector(f2, mu));
    for (const auto& w : c.witnesses) {
        CHECK(w.slot == 2);
        CHECK(hashes.count(w.hash) == 1);
    }
    CHECK(c.route == "full+localized");
    CHECK(c.routes_agree);
}

TEST_CASE("stage 1 over F_p[x]/(x^p)")
{
    for (std::uint32_t p : {2u, 3u, 5u}) {
        CAPTURE(p);
        const PrimeField f(p);
        const auto r1 = truncated_polynomial_algebra(f, p);
        const Stage s = make_stage(r1, 1);
        const StageCertificate c = verify_stage(s.data);
        CHECK(c.cycle_ok);
        CHECK(c.profile_ok);
        CHECK(c.boundary_exists);
        CHECK(c.obstruction_ok);
        CHECK(c.routes_agree);
        REQUIRE(c.candidate_count);
        CHECK(*c.candidate_count == p);
        CHECK(c.witnesses.size() == p);

        // independent preimage computation through the module-level complex
        const MultiIndexedComplex j = tensor_power(s.res.injective.complex, 2, 3);
        const auto pre = preimage_set(j.complex, Cochain{1, s.data.lambda.coords});
        REQUIRE(pre);
        CHECK(pre->dimension() == 1);
        std::vector<Matrix> ops;
        for (const auto& g : r1.maxideal_basis())
            ops.push_back(j.complex.module(0).action_of(factor_embedding(r1, 2, 2).apply(g)));
        for (const auto& mu : pre->enumerate(p)) {
            bool moved = false;
            for (const auto& op : ops)
                moved = moved || !is_zero(op.apply(mu));
            CHECK(moved);
        }
    }
}

TEST_CASE("stage 2 over F_2[x]/(x^2)")
{
    const auto start = std::chrono::steady_clock::now();
    const Stage s = make_stage(truncated_polynomial_algebra(f2, 2), 2);
    const StageCertificate c = verify_stage(s.data);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 60.0);

    // dim I^l = 2, so dim J^t_6 = #compositions of t into 6 parts * 2^6
    CHECK(c.window_dims.at(1) == binomial(6, 5) * 64);
    CHECK(c.window_dims.at(2) == binomial(7, 5) * 64);
    CHECK(c.window_dims.at(1) == 384);
    CHECK(c.window_dims.at(2) == 1344);
    CHECK(c.s_i == std::vector<std::size_t>{5, 6});
    CHECK(c.lambda_diagram == "a a a a | b b");
    CHECK(c.lambda_index == std::vector<int>{0, 0, 0, 0, 1, 1});
    CHECK(c.all_ok());
    CHECK_FALSE(c.candidate_count);
    REQUIRE(c.rank_proof);
    CHECK(c.rank_proof->augmented_rank == c.rank_proof->rank + 1);

    StageOptions full;
    full.route = Route::full;
    full.cross_check = false;
    StageOptions local;
    local.route = Route::localized;
    const StageCertificate cf = verify_stage(s.data, full);
    const StageCertificate cl = verify_stage(s.data, local);
    CHECK(cf.obstruction_ok);
    CHECK(cl.obstruction_ok);
    CHECK(cl.route == "localized");
    CHECK(cf.boundary_dim == cl.boundary_dim);
}

TEST_CASE("routes agree across rings")
{
    const std::vector<FiniteDimAlgebra> rings{truncated_polynomial_algebra(PrimeField(3), 3), truncated_polynomial_algebra(f2, 4),
                                              square_zero_algebra(f2, 2)};
    for (const auto& r1 : rings) {
        const Stage s = make_stage(r1, 1);
        StageOptions local;
        local.route = Route::localized;
        const StageCertificate a = verify_stage(s.data);
        const StageCertificate b = verify_stage(s.data, local);
        CHECK(a.all_ok());
        CHECK(b.all_ok());
        CHECK(a.boundary_dim == b.boundary_dim);
    }
}

TEST_CASE("every socle choice of b gives an obstruction")
{
    const auto r1 = truncated_polynomial_algebra(PrimeField(3), 3);
    const ResidueResolution res = resolve_residue_field(r1, 2);
    CHECK(socle_choices(res.injective).size() == 2);
    CHECK(sweep_socle_choices(res, 1));
    const ResidueResolution sq = resolve_residue_field(square_zero_algebra(f2, 2), 2);
    CHECK(socle_choices(sq.injective).size() == 3);
    CHECK(sweep_socle_choices(sq, 1));
}

TEST_CASE("negative control: a cocycle in degree 0 is not a boundary")
{
    Stage s = make_stage(truncated_polynomial_algebra(f2, 2), 1);
    const int zero[] = {0, 0};
    const std::vector<Vec> aa{s.data.a, s.data.a};
    s.data.lambda = Cochain{0, s.data.window->pure_tensor(zero, aa)};
    CHECK(code_of([&] { verify_stage(s.data); }) == ErrorCode::not_a_boundary);

    s.data.lambda = Cochain{1, unit_vec(s.data.window->dim(1), 0)};
    if (!is_zero(s.data.window->apply_differential(1, s.data.lambda.coords)))
        CHECK(code_of([&] { verify_stage(s.data); }) == ErrorCode::not_a_cycle);
}

TEST_CASE("stage construction guards")
{
    const auto r1 = truncated_polynomial_algebra(f2, 2);
    const ResidueResolution res = resolve_residue_field(r1, 2);
    const Vec a = choose_a(res.injective), b = choose_b(res.injective);
    CHECK(code_of([&] { build_stage(res, 2, a, b); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { build_stage(res, 0, a, b); }) == ErrorCode::invalid_argument);
    StageOptions tiny;
    tiny.memory_budget = 1024;
    CHECK(code_of([&] { build_stage(res, 1, a, b, tiny); }) == ErrorCode::resource_budget_exceeded);
}

TEST_CASE("slot sets are disjoint")
{
    std::set<std::size_t> seen;
    for (std::size_t i = 1; i <= 200; ++i) {
        const auto s = stage_slots(i);
        CHECK(s.size() == i);
        CHECK(s.front() == i * i + 1);
        CHECK(s.back() == stage_n(i));
        for (std::size_t j : s)
            CHECK(seen.insert(j).second);
    }
}

TEST_CASE("envelope of tensor products on small rings")
{
    const PrimeField f3(3);
    struct Ring {
        std::string label;
        FiniteDimAlgebra a;
    };
    const std::vector<Ring> rings{{"trunc:2", truncated_polynomial_algebra(f2, 2)},
                                  {"trunc:3", truncated_polynomial_algebra(f3, 3)},
                                  {"trunc:4", truncated_polynomial_algebra(f2, 4)},
                                  {"sqzero:2", square_zero_algebra(f2, 2)}};
    std::size_t checked = 0;
    for (const auto& l : rings)
        for (const auto& r : rings) {
            if (l.a.field() != r.a.field())
                continue;
            const Lemma21Report rep = verify_lemma21_instance(l.a, r.a, l.label, r.label);
            CAPTURE(l.label);
            CAPTURE(r.label);
            CHECK(rep.dim_tensor == rep.dim_left * rep.dim_right);
            CHECK(rep.dim_envelope == rep.dim_tensor);
            CHECK(rep.socle_dim == 1);
            CHECK(rep.baer == "pass");
            CHECK(rep.isomorphism_found);
            CHECK(rep.ok());
            ++checked;
        }
    CHECK(checked == 10);

    const Lemma21Report with_field = verify_lemma21_instance(truncated_polynomial_algebra(f2, 4), ground_field_algebra(f2), "trunc:4", "field");
    CHECK(with_field.dim_tensor == 4);
    CHECK(with_field.ok());

    Lemma21Options small;
    small.baer.max_ring_elements = 16;
    const Lemma21Report skipped = verify_lemma21_instance(truncated_polynomial_algebra(f2, 4), truncated_polynomial_algebra(f2, 4),
                                                          "trunc:4", "trunc:4", small);
    CHECK(skipped.baer == "skipped");
    CHECK_FALSE(skipped.baer_note.empty());
    CHECK(skipped.ok());

    CHECK(code_of([&] { verify_lemma21_instance(truncated_polynomial_algebra(f2, 2), truncated_polynomial_algebra(f3, 3), "a", "b"); })
          == ErrorCode::field_mismatch);
}

TEST_CASE("global certificate assembly")
{
    const auto r1 = truncated_polynomial_algebra(f2, 2);
    const ResidueResolution res = resolve_residue_field(r1, 3);
    const Vec a = choose_a(res.injective), b = choose_b(res.injective);
    std::vector<StageCertificate> stages;
    for (std::size_t i = 1; i <= 2; ++i)
        stages.push_back(verify_stage(build_stage(res, i, a, b)));
    const std::vector<Lemma21Report> lemma{verify_lemma21_instance(r1, r1, "trunc:2", "trunc:2")};
    const GlobalMetadata meta{2, "trunc:2", sha256_hex("trunc:2"), 2};

    const GlobalCertificate g = assemble_global_certificate(stages, lemma, meta);
    CHECK(g.disjoint);
    CHECK(g.stages.size() == 2);
    bool labelled = false;
    for (const auto& line : g.inference)
        labelled = labelled || line.rfind("INFERENCE", 0) == 0;
    CHECK(labelled);

    const GlobalMetadata one{2, "trunc:2", sha256_hex("trunc:2"), 1};
    CHECK(assemble_global_certificate({stages[0]}, lemma, one).stages.size() == 1);

    auto tampered = stages;
    tampered[0].obstruction_ok = false;
    CHECK(code_of([&] { assemble_global_certificate(tampered, lemma, meta); }) == ErrorCode::incomplete_stages);
    CHECK(code_of([&] { assemble_global_certificate({stages[1]}, lemma, meta); }) == ErrorCode::incomplete_stages);
    auto moved = stages;
    moved[1].s_i = {2};
    CHECK(code_of([&] { assemble_global_certificate(moved, lemma, meta); }) == ErrorCode::incomplete_stages);
}

TEST_CASE("certificates are deterministic and round-trip")
{
    const auto r1 = truncated_polynomial_algebra(f2, 2);
    auto run = [&] {
        const ResidueResolution res = resolve_residue_field(r1, 3);
        const Vec a = choose_a(res.injective), b = choose_b(res.injective);
        std::vector<StageCertificate> stages;
        for (std::size_t i = 1; i <= 2; ++i)
            stages.push_back(verify_stage(build_stage(res, i, a, b)));
        return assemble_global_certificate(stages, {verify_lemma21_instance(r1, r1, "trunc:2", "trunc:2")},
                                           {2, "trunc:2", sha256_hex("trunc:2"), 2});
    };
    const GlobalCertificate g1 = run(), g2 = run();
    const std::string t1 = to_json(g1), t2 = to_json(g2);
    CHECK(t1 == t2);
    CHECK(global_certificate_from_json(t1) == g1);
    CHECK(to_json(global_certificate_from_json(t1)) == t1);
    for (const auto& s : g1.stages)
        CHECK(stage_certificate_from_json(to_json(s)) == s);
    CHECK(lemma21_report_from_json(to_json(g1.lemma21[0])) == g1.lemma21[0]);

    CHECK(code_of([&] { global_certificate_from_json("{\"schema\": "); }) == ErrorCode::parse_error);
    CHECK(code_of([&] { global_certificate_from_json("{\"schema\": \"other/1\"}"); }) == ErrorCode::validation_error);
    std::string missing = t1;
    missing.replace(missing.find("\"disjoint\""), 10, "\"disjointX\"");
    CHECK(code_of([&] { global_certificate_from_json(missing); }) == ErrorCode::validation_error);
}

TEST_CASE("finite sums of shifts of k")
{
    const RemarkReport r = remark_checks(truncated_polynomial_algebra(f2, 2), 8, 6);
    CHECK(r.checks.size() == 8);
    for (const auto& c : r.checks) {
        CAPTURE(c.name);
        CAPTURE(c.detail);
        CHECK(c.passed);
    }
    CHECK(r.all_passed());
    CHECK(remark_checks(truncated_polynomial_algebra(PrimeField(3), 3), 3, 3).all_passed());
}
