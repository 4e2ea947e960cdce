#include "homcert/stage.hpp"

#include "homcert/error.hpp"
#include "homcert/hash.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

namespace homcert {

namespace {

std::string join(const std::vector<std::size_t>& xs)
{
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k)
        out += (k ? "," : "") + std::to_string(xs[k]);
    return out;
}

std::string slot_diagram(const std::vector<int>& index)
{
    std::string out;
    for (std::size_t k = 0; k < index.size(); ++k) {
        if (k > 0)
            out += index[k] != index[k - 1] ? " | " : " ";
        out += index[k] == 0 ? "a" : index[k] == 1 ? "b" : std::to_string(index[k]);
    }
    return out;
}

Matrix obstruction_operator(const StageData& s, int degree)
{
    std::vector<Matrix> blocks;
    for (std::size_t j : s.s_i)
        for (const auto& g : s.r1.maxideal_basis())
            blocks.push_back(s.window->factor_action(degree, j, g));
    if (blocks.empty())
        return Matrix(s.window->field(), 0, s.window->dim(degree));
    return Matrix::vstack(blocks);
}

struct LocalizedOutcome {
    bool boundary_exists = false;
    std::size_t boundary_dim = 0;
    bool obstruction = false;
    RankProof proof;
};

LocalizedOutcome run_localized(const Matrix& d, const Matrix& b, const Vec& lambda, Backend backend)
{
    const PrimeField f = d.field();
    LocalizedOutcome out;
    const LocalizedSystem ld = localize(d, lambda);
    out.boundary_exists = solve_affine(ld.matrix, ld.rhs, backend).has_value();
    out.boundary_dim = d.cols() - block_rank(d);

    std::vector<Matrix> parts{d, b};
    const Matrix joint = Matrix::vstack(parts);
    Vec rhs = lambda;
    rhs.resize(joint.rows(), 0);
    const LocalizedSystem lj = localize(joint, rhs);
    const std::vector<Vec> rhs_col{lj.rhs};
    const std::vector<Matrix> aug_parts{lj.matrix, Matrix::from_columns(f, lj.matrix.rows(), rhs_col)};
    const std::size_t r = rank(lj.matrix, backend);
    const std::size_t ra = rank(Matrix::hstack(aug_parts), backend);
    out.proof = RankProof{lj.matrix.rows(), lj.matrix.cols(), r, ra};
    out.obstruction = ra > r;
    return out;
}

} // namespace

ResidueResolution resolve_residue_field(const FiniteDimAlgebra& r1, std::size_t length)
{
    FreeResolution free = minimal_free_resolution(residue_module(r1), length);
    InjectiveResolution inj = dualize_to_injective_resolution(free, injective_envelope(r1));
    return {r1, std::move(free), std::move(inj)};
}

Vec choose_a(const InjectiveResolution& i)
{
    const CochainComplex& c = i.complex;
    if (cohomology_dim(c, 0) != 1)
        throw Error(ErrorCode::resolution_invalid, "H^0 of the injective resolution is not one-dimensional");
    std::vector<Vec> cols;
    for (std::size_t k = 0; k < i.coaugmentation.cols(); ++k)
        cols.push_back(i.coaugmentation.column(k));
    const std::vector<Vec> image = row_space_basis(c.field(), c.dim(0), cols);
    if (image.size() != 1)
        throw Error(ErrorCode::resolution_invalid, "image of k -> I^0 is not one-dimensional");
    if (!is_zero(c.differential(0).apply(image.front())))
        throw Error(ErrorCode::resolution_invalid, "image of k -> I^0 is not a cycle");
    return image.front();
}

Vec choose_b(const InjectiveResolution& i)
{
    const CochainComplex& c = i.complex;
    if (c.dim(1) == 0)
        throw Error(ErrorCode::projective_residue, "I^1 = 0: the residue field is projective over R_1");
    const std::vector<Vec> soc = socle(c.module(1));
    if (soc.empty())
        throw Error(ErrorCode::socle_empty, "I^1 has no nonzero element killed by m");
    return soc.front();
}

std::vector<Vec> socle_choices(const InjectiveResolution& i, std::size_t limit)
{
    const CochainComplex& c = i.complex;
    if (c.dim(1) == 0)
        throw Error(ErrorCode::projective_residue, "I^1 = 0: the residue field is projective over R_1");
    const std::vector<Vec> soc = socle(c.module(1));
    if (soc.empty())
        throw Error(ErrorCode::socle_empty, "I^1 has no nonzero element killed by m");
    const AffineSolutionSet span(c.field(), zero_vec(c.dim(1)), soc);
    if (span.cardinality() - 1 > limit)
        throw Error(ErrorCode::budget_exceeded, "socle of I^1 has more than " + std::to_string(limit) + " nonzero elements");
    std::vector<Vec> all = span.enumerate(limit + 1);
    all.erase(all.begin()); // the zero vector comes first
    return all;
}

std::size_t stage_n(std::size_t i) noexcept { return i * i + i; }

std::vector<std::size_t> stage_slots(std::size_t i)
{
    std::vector<std::size_t> out;
    for (std::size_t j = i * i + 1; j <= i * i + i; ++j)
        out.push_back(j);
    return out;
}

std::size_t estimate_stage_memory(const TensorPowerWindow& w, int degree)
{
    const std::size_t nnz = w.differential_nnz_bound(degree) + w.n() * w.dim(degree);
    return nnz * 96 + (w.dim(degree) + w.dim(degree + 1) + w.dim(degree + 2)) * 32;
}

StageData build_stage(const ResidueResolution& res, std::size_t i, const Vec& a, const Vec& b, const StageOptions& options)
{
    if (i == 0)
        throw Error(ErrorCode::invalid_argument, "stages start at i = 1");
    const CochainComplex& inj = res.injective.complex;
    if (inj.hi() < static_cast<int>(i) + 1)
        throw Error(ErrorCode::invalid_argument, "stage " + std::to_string(i) + " needs an injective resolution of length "
                                                     + std::to_string(i + 1));
    if (a.size() != inj.dim(0) || b.size() != inj.dim(1))
        throw Error(ErrorCode::dimension_mismatch, "a must lie in I^0 and b in I^1");
    const int degree = static_cast<int>(i);
    auto window = std::make_shared<TensorPowerWindow>(inj, stage_n(i), degree - 1, degree);
    const std::size_t need = estimate_stage_memory(*window, degree - 1);
    if (need > options.memory_budget)
        throw Error(ErrorCode::resource_budget_exceeded, "stage " + std::to_string(i) + " needs about " + std::to_string(need >> 20)
                                                             + " MiB, budget is " + std::to_string(options.memory_budget >> 20) + " MiB");
    std::vector<AlgebraMorphism> embeddings;
    std::vector<int> index;
    std::vector<Vec> factors;
    for (std::size_t j = 1; j <= stage_n(i); ++j) {
        embeddings.push_back(factor_embedding(res.r1, stage_n(i), j));
        const bool in_s = j > i * i;
        index.push_back(in_s ? 1 : 0);
        factors.push_back(in_s ? b : a);
    }
    Cochain lambda{degree, window->pure_tensor(index, factors)};
    return StageData{i, stage_n(i), stage_slots(i), res.r1, std::move(embeddings), std::move(window), a, b, std::move(index), std::move(lambda)};
}

StageCertificate verify_stage(const StageData& s, const StageOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    const TensorPowerWindow& w = *s.window;
    const PrimeField f = w.field();
    const int t = s.lambda.degree;
    if (t < w.lo() || t > w.hi())
        throw Error(ErrorCode::index_out_of_range, "cochain degree outside the stage window");
    if (s.lambda.coords.size() != w.dim(t))
        throw Error(ErrorCode::dimension_mismatch, "cochain does not match its degree");

    StageCertificate cert;
    cert.stage = s.i;
    cert.n = s.n;
    cert.s_i = s.s_i;
    for (int d = w.lo(); d <= w.hi() + 1; ++d)
        cert.window_dims[d] = w.dim(d);
    cert.lambda_index = s.lambda_index;
    cert.lambda_diagram = slot_diagram(s.lambda_index);
    cert.lambda_degree = t;

    if (!is_zero(w.apply_differential(t, s.lambda.coords)))
        throw Error(ErrorCode::not_a_cycle, "d lambda_" + std::to_string(s.i) + " != 0");
    cert.cycle_ok = true;

    const AnnihilationProfile profile = annihilation_profile(
        s.lambda.coords, [&](std::span<const Scalar> r, std::span<const Scalar> v) { return w.apply_ring_element(t, r, v); },
        s.embeddings);
    cert.lambda_active_factors.assign(profile.active_factors.begin(), profile.active_factors.end());
    cert.profile_ok = profile.active_factors.empty();

    cert.hashes["a"] = hash_vector(f, s.a);
    cert.hashes["b"] = hash_vector(f, s.b);
    cert.hashes["lambda"] = hash_vector(f, s.lambda.coords);

    if (t - 1 < w.lo()) {
        if (!is_zero(s.lambda.coords))
            throw Error(ErrorCode::not_a_boundary, "nonzero cochain in the lowest degree of the window");
    }
    if (t - 1 < 0)
        throw Error(ErrorCode::not_a_boundary, "nonzero cochain in degree 0 of a complex starting in degree 0");

    const Matrix d = w.differential(t - 1);
    const Matrix b = obstruction_operator(s, t - 1);
    cert.hashes["differential"] = hash_matrix(d);
    cert.hashes["obstruction_operator"] = hash_matrix(b);

    const bool full = options.route == Route::full
                      || (options.route == Route::automatic && w.dim(t) <= options.full_route_max_dim);
    std::optional<AffineSolutionSet> solutions;
    std::optional<bool> full_obstruction;
    if (full) {
        solutions = solve_affine(d, s.lambda.coords, options.backend);
        if (!solutions)
            throw Error(ErrorCode::not_a_boundary, "lambda_" + std::to_string(s.i) + " is not a boundary");
        cert.boundary_exists = true;
        cert.boundary_dim = solutions->dimension();
        full_obstruction = !intersect_affine_with_kernel(*solutions, b, options.backend).has_value();
    }
    const bool can_enumerate = solutions && solutions->cardinality() <= options.enumeration_limit;
    const bool localized = !full || options.route == Route::localized || options.cross_check || !can_enumerate;

    std::optional<LocalizedOutcome> loc;
    if (localized) {
        loc = run_localized(d, b, s.lambda.coords, options.backend);
        if (!loc->boundary_exists)
            throw Error(ErrorCode::not_a_boundary, "lambda_" + std::to_string(s.i) + " is not a boundary");
        cert.rank_proof = loc->proof;
    }

    if (full && loc) {
        cert.route = "full+localized";
        cert.routes_agree = loc->boundary_exists == cert.boundary_exists && loc->boundary_dim == cert.boundary_dim
                            && loc->obstruction == *full_obstruction;
        cert.obstruction_ok = *full_obstruction;
    } else if (full) {
        cert.route = "full";
        cert.obstruction_ok = *full_obstruction;
    } else {
        cert.route = "localized";
        cert.boundary_exists = true;
        cert.boundary_dim = loc->boundary_dim;
        cert.obstruction_ok = loc->obstruction;
    }

    if (can_enumerate) {
        const std::vector<Vec> candidates = solutions->enumerate(options.enumeration_limit);
        const std::vector<Vec> gens = s.r1.maxideal_basis();
        cert.candidate_count = candidates.size();
        bool every_candidate_blocked = true;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            std::optional<CandidateWitness> found;
            for (std::size_t j : s.s_i) {
                for (std::size_t g = 0; g < gens.size() && !found; ++g)
                    if (!is_zero(w.apply_factor_action(t - 1, j, gens[g], candidates[k])))
                        found = CandidateWitness{k, j, g, hash_vector(f, candidates[k])};
                if (found)
                    break;
            }
            if (found)
                cert.witnesses.push_back(*found);
            else
                every_candidate_blocked = false;
        }
        if (every_candidate_blocked != cert.obstruction_ok)
            cert.routes_agree = false;
    }

    if (options.record_timings)
        cert.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return cert;
}

bool sweep_socle_choices(const ResidueResolution& res, std::size_t i, const StageOptions& options)
{
    const Vec a = choose_a(res.injective);
    for (const auto& b : socle_choices(res.injective)) {
        const StageCertificate c = verify_stage(build_stage(res, i, a, b, options), options);
        if (!c.all_ok())
            return false;
    }
    return true;
}

Lemma21Report verify_lemma21_instance(const FiniteDimAlgebra& r, const FiniteDimAlgebra& s, const std::string& left_label,
                                      const std::string& right_label, const Lemma21Options& options)
{
    if (r.field() != s.field())
        throw Error(ErrorCode::field_mismatch, left_label + " and " + right_label + " have different fields");
    Lemma21Report rep;
    rep.left = left_label;
    rep.right = right_label;
    rep.p = r.field().p();
    const FDModule er = injective_envelope(r);
    const FDModule es = injective_envelope(s);
    const FDModule et = tensor_module(er, es);
    const FDModule ers = injective_envelope(et.algebra());
    rep.dim_left = er.dim();
    rep.dim_right = es.dim();
    rep.dim_tensor = et.dim();
    rep.dim_envelope = ers.dim();
    rep.socle_dim = socle(et).size();
    try {
        const BaerReport baer = baer_injectivity_test(et, et.algebra(), options.baer);
        rep.baer = baer.injective ? "pass" : "fail";
        rep.baer_ideals = baer.ideals_checked;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::budget_exceeded)
            throw;
        rep.baer = "skipped";
        rep.baer_note = e.what();
    }
    if (const auto iso = find_isomorphism(ers, et)) {
        rep.isomorphism_found = true;
        rep.isomorphism_hash = hash_matrix(*iso);
    }
    return rep;
}

GlobalCertificate assemble_global_certificate(std::vector<StageCertificate> stages, std::vector<Lemma21Report> lemma21,
                                              const GlobalMetadata& meta)
{
    std::sort(stages.begin(), stages.end(), [](const auto& x, const auto& y) { return x.stage < y.stage; });
    if (stages.size() != meta.i_max)
        throw Error(ErrorCode::incomplete_stages, "expected " + std::to_string(meta.i_max) + " stages, got "
                                                      + std::to_string(stages.size()));
    std::set<std::size_t> used;
    bool disjoint = true;
    for (std::size_t k = 0; k < stages.size(); ++k) {
        const StageCertificate& c = stages[k];
        if (c.stage != k + 1)
            throw Error(ErrorCode::incomplete_stages, "stage " + std::to_string(k + 1) + " is missing");
        if (!c.all_ok())
            throw Error(ErrorCode::incomplete_stages, "stage " + std::to_string(c.stage) + " is not fully verified");
        if (c.s_i != stage_slots(c.stage) || c.n != stage_n(c.stage))
            throw Error(ErrorCode::incomplete_stages, "stage " + std::to_string(c.stage) + " has the wrong slot set");
        for (std::size_t j : c.s_i)
            disjoint = used.insert(j).second && disjoint;
    }
    if (!disjoint)
        throw Error(ErrorCode::incomplete_stages, "slot sets S_i overlap");
    for (const auto& r : lemma21)
        if (!r.ok())
            throw Error(ErrorCode::incomplete_stages, "envelope check " + r.left + " (x) " + r.right + " failed");

    GlobalCertificate g;
    g.stages = stages;
    g.lemma21 = lemma21;
    g.p = meta.p;
    g.ring = meta.ring;
    g.ring_hash = meta.ring_hash;
    g.i_max = meta.i_max;
    g.disjoint = disjoint;
    const std::string k = std::to_string(meta.i_max);
    for (const auto& c : stages)
        g.inference.push_back("VERIFIED stage " + std::to_string(c.stage) + ": lambda = " + c.lambda_diagram + " in J^"
                              + std::to_string(c.lambda_degree) + " over R_" + std::to_string(c.n)
                              + " is a cycle, is killed by Phi_j(m) for every j, is a boundary, and no preimage is killed by "
                                "Phi_j(m) for all j in S = {"
                              + join(c.s_i) + "}.");
    g.inference.push_back("VERIFIED: S_1, ..., S_" + k + " are pairwise disjoint.");
    for (const auto& r : lemma21)
        g.inference.push_back("VERIFIED: Hom_k(" + r.left + ", k) (x) Hom_k(" + r.right
                              + ", k) has one-dimensional socle and is isomorphic to Hom_k of the tensor product (Baer test: "
                              + r.baer + "); each J^t_n is a finite sum of tensor powers of this envelope.");
    g.inference.push_back("INFERENCE: every Phi_j(m) kills the family (lambda_i) element by element, so it lies in the product "
                          "taken in the category of modules on which all but finitely many Phi_j(m) act trivially, when that "
                          "product is described element by element. Whether that description is literally an object of the "
                          "category is not checked.");
    g.inference.push_back("INFERENCE: a preimage of the family would have to be killed by Phi_j(m) for all but finitely many j, "
                          "while each stage i forces some j in S_i that does not kill it; as the S_i are disjoint this gives "
                          "infinitely many such j, so the family is not a boundary and H^0 of the product of the A[i] is "
                          "nonzero. Since H^0 of every finite sum of the A[i], i >= 1, vanishes, the derived category is not "
                          "left-complete.");
    g.inference.push_back("INFERENCE: only stages 1.." + k + " are machine-checked; the statement for all i is extrapolated.");
    return g;
}

bool RemarkReport::all_passed() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const RemarkCheck& c) { return c.passed; });
}

RemarkReport remark_checks(const FiniteDimAlgebra& r1, std::size_t n_max, std::size_t truncation_max)
{
    const FDModule k = residue_module(r1);
    const std::size_t dim_a = k.dim();
    const CochainComplex a0 = CochainComplex::concentrated(k, 0);
    const CochainComplex inj = resolve_residue_field(r1, std::max<std::size_t>(n_max, truncation_max) + 2).injective.complex;

    auto sum_of_shifts = [](const CochainComplex& model, std::size_t from, std::size_t to) {
        std::vector<CochainComplex> parts;
        for (std::size_t i = from; i <= to; ++i)
            parts.push_back(shift(model, static_cast<int>(i)));
        return finite_sum(parts);
    };
    auto failures_text = [](const std::vector<std::string>& failures, const std::string& ok) {
        if (failures.empty())
            return ok;
        std::string out = "failed at";
        for (const auto& f : failures)
            out += " " + f;
        return out;
    };

    RemarkReport rep;
    for (const auto& [label, model] : {std::pair{std::string("k"), a0}, std::pair{std::string("injective resolution of k"), inj}}) {
        std::vector<std::string> fail;
        for (std::size_t n = 1; n <= n_max; ++n)
            if (cohomology_dim(sum_of_shifts(model, 1, n), 0) != 0)
                fail.push_back("n=" + std::to_string(n));
        rep.checks.push_back({"H^0 of A[1] + ... + A[n] vanishes, A = " + label, fail.empty(),
                              failures_text(fail, "n = 1.." + std::to_string(n_max))});

        fail.clear();
        const std::size_t big = n_max;
        const CochainComplex whole = sum_of_shifts(model, 1, big);
        for (std::size_t n = 1; n < big; ++n) {
            const CochainComplex left = sum_of_shifts(model, 1, n);
            const CochainComplex right = sum_of_shifts(model, n + 1, big);
            for (int m = -static_cast<int>(big); m <= 0; ++m)
                if (cohomology_dim(whole, m) != cohomology_dim(left, m) + cohomology_dim(right, m))
                    fail.push_back("n=" + std::to_string(n) + ",H^" + std::to_string(m));
        }
        rep.checks.push_back({"H^* of A[1..N] splits as A[1..n] + A[n+1..N], A = " + label, fail.empty(),
                              failures_text(fail, "N = " + std::to_string(big) + ", all n < N")});

        fail.clear();
        const CochainComplex from_zero = sum_of_shifts(model, 0, big);
        for (std::size_t i = 0; i <= big; ++i)
            if (cohomology_dim(from_zero, -static_cast<int>(i)) != dim_a)
                fail.push_back("i=" + std::to_string(i));
        rep.checks.push_back({"H^{-i} of A[0] + ... + A[N] is A, A = " + label, fail.empty(),
                              failures_text(fail, "N = " + std::to_string(big) + ", 0 <= i <= N")});

        fail.clear();
        for (std::size_t big_n = 0; big_n <= truncation_max; ++big_n) {
            const CochainComplex sum = sum_of_shifts(model, 0, big_n);
            for (std::size_t n = 0; n <= big_n; ++n) {
                const CochainComplex truncated = truncate_geq(sum, -static_cast<int>(n));
                const CochainComplex expected = sum_of_shifts(model, 0, n);
                for (int m = -static_cast<int>(big_n) - 1; m <= 1; ++m)
                    if (cohomology_dim(truncated, m) != cohomology_dim(expected, m))
                        fail.push_back("N=" + std::to_string(big_n) + ",n=" + std::to_string(n) + ",H^" + std::to_string(m));
            }
        }
        rep.checks.push_back({"tau^{>=-n}(A[0] + ... + A[N]) has the cohomology of A[0] + ... + A[n], A = " + label, fail.empty(),
                              failures_text(fail, "0 <= n <= N <= " + std::to_string(truncation_max))});
    }
    return rep;
}

} // namespace homcert
