// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails. `--stage3` additionally runs the optional third stage.

#include "homcert/cli.hpp"
#include "homcert/error.hpp"
#include "homcert/stage.hpp"

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace homcert;

namespace {

constexpr double stage1_seconds = 1.0;
constexpr double stage2_seconds = 60.0;
constexpr double stage3_seconds = 600.0;
constexpr std::size_t memory_limit_bytes = std::size_t{2} << 30;
constexpr std::size_t baer_element_limit = std::size_t{1} << 16;
constexpr std::size_t random_matrices = 120;
constexpr std::size_t random_max_dim = 200;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::size_t peak_rss_bytes()
{
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return static_cast<std::size_t>(u.ru_maxrss) * 1024;
}

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            if (!detail.empty())
                detail += "; ";
            detail += what;
        }
    }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli_captured(std::vector<std::string> args)
{
    args.insert(args.begin(), "homcert");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct StageRun {
    ResidueResolution res;
    StageData data;
    StageCertificate cert;
    double seconds;
};

StageRun run_stage(const FiniteDimAlgebra& r1, std::size_t i, const StageOptions& opt = {})
{
    const auto start = Clock::now();
    ResidueResolution res = resolve_residue_field(r1, i + 1);
    StageData data = build_stage(res, i, choose_a(res.injective), choose_b(res.injective), opt);
    StageCertificate cert = verify_stage(data, opt);
    const double seconds = since(start);
    return {std::move(res), std::move(data), std::move(cert), seconds};
}

std::string fmt(double seconds)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3fs", seconds);
    return buf;
}

Outcome criterion1()
{
    Outcome o;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        const StageRun s = run_stage(truncated_polynomial_algebra(PrimeField(p), p), 1);
        const std::string tag = "p=" + std::to_string(p);
        o.require(s.cert.cycle_ok, tag + " not a cycle");
        o.require(s.cert.boundary_exists, tag + " not a boundary");
        o.require(s.cert.obstruction_ok, tag + " some preimage is killed by Phi_2(m)");
        o.require(s.seconds < stage1_seconds, tag + " took " + fmt(s.seconds));
        o.detail += (o.detail.empty() ? "" : ", ") + tag + " " + fmt(s.seconds);
    }
    return o;
}

Outcome criterion2(bool with_stage3)
{
    Outcome o;
    const auto r1 = truncated_polynomial_algebra(PrimeField(2), 2);
    const StageRun s = run_stage(r1, 2);
    o.require(s.cert.window_dims.at(1) == 384, "dim J^1_6 = " + std::to_string(s.cert.window_dims.at(1)));
    o.require(s.cert.window_dims.at(2) == 1344, "dim J^2_6 = " + std::to_string(s.cert.window_dims.at(2)));
    o.require(s.cert.all_ok(), "stage 2 checks failed");
    o.require(s.seconds < stage2_seconds, "stage 2 took " + fmt(s.seconds));
    o.require(peak_rss_bytes() < memory_limit_bytes, "peak RSS " + std::to_string(peak_rss_bytes() >> 20) + " MiB");
    std::string detail = "dims 384/1344, " + fmt(s.seconds) + ", peak RSS " + std::to_string(peak_rss_bytes() >> 20) + " MiB";
    if (with_stage3) {
        StageOptions opt;
        opt.backend = Backend::sparse;
        const StageRun t = run_stage(r1, 3, opt);
        o.require(t.cert.all_ok(), "stage 3 checks failed");
        o.require(t.seconds < stage3_seconds, "stage 3 took " + fmt(t.seconds));
        detail += "; stage 3 dim J^3_12 = " + std::to_string(t.cert.window_dims.at(3)) + ", " + fmt(t.seconds);
    } else {
        detail += "; stage 3 not requested";
    }
    o.detail = o.ok ? detail : o.detail;
    return o;
}

std::size_t ring_cardinality(const FiniteDimAlgebra& a)
{
    std::size_t n = 1;
    for (std::size_t k = 0; k < a.dim(); ++k) {
        n *= a.field().p();
        if (n > baer_element_limit)
            return n;
    }
    return n;
}

Outcome criterion3()
{
    Outcome o;
    const PrimeField f2(2), f3(3);
    struct Ring {
        std::string label;
        FiniteDimAlgebra a;
    };
    const std::vector<Ring> rings{{"trunc:2", truncated_polynomial_algebra(f2, 2)},
                                  {"trunc:3", truncated_polynomial_algebra(f3, 3)},
                                  {"trunc:4", truncated_polynomial_algebra(f2, 4)},
                                  {"sqzero:2", square_zero_algebra(f2, 2)}};
    std::size_t pairs = 0, baer_runs = 0;
    for (const auto& l : rings)
        for (const auto& r : rings) {
            if (l.a.field() != r.a.field())
                continue;
            ++pairs;
            const std::string tag = l.label + " (x) " + r.label;
            const Lemma21Report rep = verify_lemma21_instance(l.a, r.a, l.label, r.label);
            o.require(rep.dim_envelope == rep.dim_left * rep.dim_right, tag + " dimension");
            o.require(rep.dim_tensor == rep.dim_left * rep.dim_right, tag + " tensor dimension");
            o.require(rep.socle_dim == 1, tag + " socle dim " + std::to_string(rep.socle_dim));
            const bool small = ring_cardinality(tensor_algebra(l.a, r.a)) <= baer_element_limit;
            if (small) {
                o.require(rep.baer == "pass", tag + " Baer " + rep.baer);
                ++baer_runs;
            }
            o.require(rep.isomorphism_found, tag + " no envelope isomorphism");
        }
    if (o.ok)
        o.detail = std::to_string(pairs) + " pairs, " + std::to_string(baer_runs) + " Baer tests";
    return o;
}

Outcome criterion4()
{
    Outcome o;
    const PrimeField f2(2), f3(3), f5(5);
    const std::vector<std::pair<std::string, FiniteDimAlgebra>> presets{
        {"trunc:2", truncated_polynomial_algebra(f2, 2)},   {"trunc:3", truncated_polynomial_algebra(f3, 3)},
        {"trunc:5", truncated_polynomial_algebra(f5, 5)},   {"trunc:4", truncated_polynomial_algebra(f2, 4)},
        {"sqzero:2", square_zero_algebra(f2, 2)},           {"trunc2:2,2", tensor_power(truncated_polynomial_algebra(f2, 2), 2)},
        {"field", ground_field_algebra(f2)}};
    std::size_t entries = 0;
    for (const auto& [label, a] : presets) {
        const FreeResolution p = minimal_free_resolution(residue_module(a), 4);
        const Vec eps = a.residue_functional();
        bool clean = true;
        for (const auto& d : p.entries)
            for (const auto& row : d)
                for (const auto& entry : row) {
                    clean = clean && dot(a.field(), eps, entry) == 0;
                    ++entries;
                }
        o.require(clean, label + " has a unit entry");
        o.require(p.is_minimal() == clean, label + " is_minimal disagrees");
    }
    if (o.ok)
        o.detail = std::to_string(presets.size()) + " presets, " + std::to_string(entries) + " entries";
    return o;
}

Outcome criterion5()
{
    Outcome o;
    const auto a = truncated_polynomial_algebra(PrimeField(2), 2);
    const CochainComplex i = resolve_residue_field(a, 5).injective.complex;
    for (std::size_t n = 1; n <= 4; ++n) {
        const MultiIndexedComplex j = tensor_power(i, n, 4);
        for (int t = 0; t <= 3; ++t) {
            const std::size_t h = cohomology_dim(j.complex, t);
            o.require(h == (t == 0 ? 1u : 0u), "H^" + std::to_string(t) + "(J_" + std::to_string(n) + ") = " + std::to_string(h));
        }
    }
    if (o.ok)
        o.detail = "n = 1..4, degrees 0..3";
    return o;
}

CochainComplex sum_of_shifts(const FiniteDimAlgebra& a, int from, int to)
{
    std::vector<CochainComplex> parts;
    for (int i = from; i <= to; ++i)
        parts.push_back(shift(CochainComplex::concentrated(residue_module(a), 0), i));
    return finite_sum(parts);
}

Outcome criterion6()
{
    Outcome o;
    const auto a = truncated_polynomial_algebra(PrimeField(2), 2);
    for (int n = 1; n <= 8; ++n)
        o.require(cohomology_dim(sum_of_shifts(a, 1, n), 0) == 0, "H^0 of the sum over 1.." + std::to_string(n));
    for (int big = 0; big <= 6; ++big)
        for (int n = 0; n <= big; ++n) {
            const CochainComplex tr = truncate_geq(sum_of_shifts(a, 0, big), -n);
            const CochainComplex ex = sum_of_shifts(a, 0, n);
            for (int m = -big - 1; m <= 1; ++m)
                o.require(cohomology_dim(tr, m) == cohomology_dim(ex, m),
                          "truncation n=" + std::to_string(n) + " N=" + std::to_string(big) + " degree " + std::to_string(m));
        }
    const RemarkReport r = remark_checks(a, 8, 6);
    for (const auto& c : r.checks)
        o.require(c.passed, c.name + ": " + c.detail);
    if (o.ok)
        o.detail = "n <= 8, 0 <= n <= N <= 6, " + std::to_string(r.checks.size()) + " model checks";
    return o;
}

Matrix random_matrix(std::mt19937_64& rng, PrimeField f, std::size_t rows, std::size_t cols, double density)
{
    std::bernoulli_distribution keep(density);
    std::uniform_int_distribution<Scalar> value(1, f.p() - 1);
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (keep(rng))
                t.push_back({r, c, value(rng)});
    return Matrix::from_triplets(f, rows, cols, std::move(t));
}

Outcome criterion7()
{
    Outcome o;
    std::mt19937_64 rng(7);
    std::size_t checked = 0;
    for (std::size_t trial = 0; trial < random_matrices; ++trial) {
        const PrimeField f(trial % 2 ? 3 : 2);
        std::uniform_int_distribution<std::size_t> dim(1, random_max_dim);
        const std::size_t rows = dim(rng), cols = dim(rng);
        const Matrix a = random_matrix(rng, f, rows, cols, trial % 3 == 0 ? 0.01 : trial % 3 == 1 ? 0.05 : 0.4);
        const std::string tag = "matrix " + std::to_string(trial);

        const Rref sweep = rref_rank(a, Backend::dense, EliminationOrder::column_sweep);
        const Rref insert = rref_rank(a, Backend::dense, EliminationOrder::row_insertion);
        const Rref sparse = rref_rank(a, Backend::sparse);
        o.require(sweep.rank == insert.rank && sweep.rank == sparse.rank, tag + " rank");
        o.require(sweep.reduced == insert.reduced && sweep.reduced == sparse.reduced, tag + " reduced form");

        const auto kd = kernel_basis(a, Backend::dense);
        const auto ks = kernel_basis(a, Backend::sparse);
        o.require(kd.size() == cols - sweep.rank, tag + " kernel dimension");
        o.require(row_space_basis(f, cols, kd) == row_space_basis(f, cols, ks), tag + " kernel");

        std::uniform_int_distribution<Scalar> value(0, f.p() - 1);
        Vec x0(cols), arbitrary(rows);
        for (auto& v : x0)
            v = value(rng);
        for (auto& v : arbitrary)
            v = value(rng);
        for (const Vec& b : {a.apply(x0), arbitrary}) {
            const auto sd = solve_affine(a, b, Backend::dense);
            const auto ss = solve_affine(a, b, Backend::sparse);
            o.require(sd.has_value() == ss.has_value(), tag + " solvability");
            if (sd && ss)
                o.require(sd->same_set(*ss), tag + " solution set");
        }
        ++checked;
    }
    if (o.ok)
        o.detail = std::to_string(checked) + " matrices over F_2/F_3, dim <= " + std::to_string(random_max_dim);
    return o;
}

Outcome criterion8()
{
    Outcome o;
    std::size_t candidates = 0;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        const PrimeField f(p);
        const auto r1 = truncated_polynomial_algebra(f, p);
        const StageRun s = run_stage(r1, 1);
        const std::string tag = "p=" + std::to_string(p);
        const TensorPowerWindow& w = *s.data.window;

        const auto set = solve_affine(w.differential(0), s.data.lambda.coords);
        o.require(set.has_value(), tag + " no preimage");
        if (!set)
            continue;
        const auto all = set->enumerate(std::size_t{p} * p);
        o.require(all.size() <= std::size_t{p} * p, tag + " more than p^2 candidates");
        bool every_moved = true;
        for (const auto& mu : all) {
            o.require(w.apply_differential(0, mu) == s.data.lambda.coords, tag + " candidate misses lambda");
            bool moved = false;
            for (const auto& g : r1.maxideal_basis())
                moved = moved || !is_zero(w.apply_factor_action(0, 2, g, mu));
            every_moved = every_moved && moved;
        }
        candidates += all.size();
        o.require(every_moved, tag + " a candidate is killed by Phi_2(m)");
        o.require(s.cert.candidate_count && *s.cert.candidate_count == all.size(), tag + " candidate count differs");
        o.require(s.cert.witnesses.size() == all.size(), tag + " witness count differs");
        o.require(s.cert.obstruction_ok == every_moved, tag + " disagrees with the linear-algebra certificate");
    }
    if (o.ok)
        o.detail = std::to_string(candidates) + " candidates over p = 2, 3, 5";
    return o;
}

Outcome criterion9()
{
    Outcome o;
    const std::vector<std::string> args{"--p", "2", "--ring", "trunc:2", "verify-theorem", "--imax", "2", "--format", "json"};
    const Run first = run_cli_captured(args);
    const Run second = run_cli_captured(args);
    auto parallel = args;
    parallel.insert(parallel.end(), {"--jobs", "2"});
    const Run third = run_cli_captured(parallel);
    o.require(first.code == 0 && second.code == 0 && third.code == 0, "verify-theorem failed");
    o.require(first.out == second.out, "two runs differ");
    o.require(first.out == third.out, "--jobs 2 differs");
    if (o.ok)
        o.detail = std::to_string(first.out.size()) + " bytes, identical across 3 runs";
    return o;
}

Outcome criterion10()
{
    Outcome o;
    const Run r = run_cli_captured({"--p", "2", "--ring", "field", "verify-theorem", "--imax", "2"});
    o.require(r.code == exit_usage, "exit code " + std::to_string(r.code));
    o.require(r.err.find("ProjectiveResidue") != std::string::npos, "no ProjectiveResidue diagnostic");
    o.require(r.out.empty(), "a report was printed");
    try {
        const ResidueResolution res = resolve_residue_field(ground_field_algebra(PrimeField(2)), 2);
        choose_b(res.injective);
        o.require(false, "choose_b accepted k over k");
    } catch (const Error& e) {
        o.require(e.code() == ErrorCode::projective_residue, std::string("wrong error: ") + e.what());
    }
    if (o.ok)
        o.detail = "rejected with ProjectiveResidue, no stage output";
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    bool with_stage3 = false;
    for (int k = 1; k < argc; ++k)
        with_stage3 = with_stage3 || std::string(argv[k]) == "--stage3";

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"stage 1 over F_p[x]/(x^p), p = 2, 3, 5", criterion1},
        {"stage 2 window, runtime and memory", [&] { return criterion2(with_stage3); }},
        {"envelope of tensor products", criterion3},
        {"minimal resolutions", criterion4},
        {"cohomology of tensor powers", criterion5},
        {"finite sums of shifts and truncations", criterion6},
        {"linear algebra backends agree", criterion7},
        {"stage 1 enumeration oracle", criterion8},
        {"deterministic certificates", criterion9},
        {"field ring rejected", criterion10},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += o.ok ? 0 : 1;
        std::cout << (o.ok ? "PASS" : "FAIL") << " " << (k + 1) << " " << criteria[k].first << " (" << o.detail << ")\n";
    }
    return failures == 0 ? 0 : 1;
}
