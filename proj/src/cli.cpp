#include "homcert/cli.hpp"

#include "homcert/error.hpp"
#include "homcert/hash.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace homcert {

namespace {

using nlohmann::json;

struct Settings {
    std::uint32_t p = 2;
    std::string ring = "trunc:2";
    std::string backend = "auto";
    std::string route = "auto";
    std::size_t memory_mib = 2048;
    std::size_t baer_ideals = BaerBudget{}.max_ideals;
    std::string output;
    std::string format = "report";
    std::size_t jobs = 1;
    bool timings = false;
    bool sweep_b = false;
    bool allow_stage3 = false;
};

/// A verification flag came back false.
struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Backend parse_backend(const std::string& s)
{
    return s == "dense" ? Backend::dense : s == "sparse" ? Backend::sparse : Backend::automatic;
}

Route parse_route(const std::string& s)
{
    return s == "full" ? Route::full : s == "localized" ? Route::localized : Route::automatic;
}

Route route_of(const std::string& recorded)
{
    return recorded == "localized" ? Route::localized : Route::full;
}

StageOptions stage_options(const Settings& s)
{
    StageOptions o;
    o.backend = parse_backend(s.backend);
    o.route = parse_route(s.route);
    o.memory_budget = s.memory_mib << 20;
    o.record_timings = s.timings;
    return o;
}

Lemma21Options lemma_options(const Settings& s)
{
    Lemma21Options o;
    o.baer.max_ideals = s.baer_ideals;
    return o;
}

void check_stage_gate(const Settings& s, std::size_t i)
{
    if (i < 3)
        return;
    if (!s.allow_stage3)
        throw UsageFailure("stage " + std::to_string(i) + " is large; pass --allow-stage3 to run it");
    if (s.backend == "dense")
        throw UsageFailure("stage " + std::to_string(i) + " needs the sparse backend");
}

std::string short_hash(const std::string& h) { return h.substr(0, 16); }

std::string list(const std::vector<std::size_t>& xs)
{
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k)
        out += (k ? "," : "") + std::to_string(xs[k]);
    return out;
}

const char* ok(bool b) { return b ? "ok" : "FAILED"; }

std::string stage_report(const StageCertificate& c)
{
    std::ostringstream o;
    o << "stage " << c.stage << ": n = " << c.n << ", S = {" << list(c.s_i) << "}\n";
    o << "  lambda        " << c.lambda_diagram << "  in J^" << c.lambda_degree << "_" << c.n << "\n";
    o << "  window       ";
    for (const auto& [d, dim] : c.window_dims)
        o << " J^" << d << " = " << dim;
    o << "\n";
    o << "  cycle         " << ok(c.cycle_ok) << "\n";
    o << "  annihilated   " << ok(c.profile_ok);
    if (!c.profile_ok)
        o << " (active factors " << list(c.lambda_active_factors) << ")";
    o << "\n";
    o << "  boundary      " << ok(c.boundary_exists) << " (preimages form an affine space of dimension " << c.boundary_dim << ")\n";
    o << "  obstruction   " << ok(c.obstruction_ok);
    if (c.candidate_count)
        o << " (" << *c.candidate_count << " candidates, " << c.witnesses.size() << " with a witness)";
    else if (c.rank_proof)
        o << " (rank " << c.rank_proof->rank << " -> " << c.rank_proof->augmented_rank << " on a " << c.rank_proof->rows << " x "
          << c.rank_proof->cols << " block)";
    o << "\n";
    o << "  route         " << c.route << (c.routes_agree ? "" : " (ROUTES DISAGREE)") << "\n";
    for (const auto& [name, h] : c.hashes)
        o << "  sha256 " << std::left << std::setw(21) << name << short_hash(h) << "\n";
    if (c.seconds)
        o << "  seconds       " << *c.seconds << "\n";
    return o.str();
}

std::string lemma_report(const Lemma21Report& r)
{
    std::ostringstream o;
    o << "envelope " << r.left << " (x) " << r.right << " over F_" << r.p << "\n";
    o << "  dims          E_R = " << r.dim_left << ", E_S = " << r.dim_right << ", E_R (x) E_S = " << r.dim_tensor
      << ", E_(R (x) S) = " << r.dim_envelope << "\n";
    o << "  socle         " << r.socle_dim << (r.socle_dim == 1 ? " (ok)" : " (FAILED)") << "\n";
    o << "  baer          " << r.baer;
    if (r.baer != "skipped")
        o << " (" << r.baer_ideals << " ideals)";
    else
        o << " (" << r.baer_note << ")";
    o << "\n";
    o << "  isomorphism   " << (r.isomorphism_found ? "found, sha256 " + short_hash(r.isomorphism_hash) : std::string("NOT FOUND"))
      << "\n";
    o << "  result        " << ok(r.ok()) << "\n";
    return o.str();
}

std::string theorem_report(const GlobalCertificate& g)
{
    std::ostringstream o;
    o << "ring " << g.ring << " over F_" << g.p << " (sha256 " << short_hash(g.ring_hash) << "), stages 1.." << g.i_max << "\n\n";
    for (const auto& c : g.stages)
        o << stage_report(c) << "\n";
    for (const auto& r : g.lemma21)
        o << lemma_report(r) << "\n";
    o << "slot sets disjoint: " << ok(g.disjoint) << "\n\n";
    for (const auto& line : g.inference)
        o << "- " << line << "\n";
    return o.str();
}

void emit(const Settings& s, std::ostream& out, const std::string& json_text, const std::string& report)
{
    if (!s.output.empty()) {
        std::ofstream f(s.output, std::ios::binary);
        if (!f)
            throw UsageFailure("cannot write '" + s.output + "'");
        f << json_text;
    }
    out << (s.format == "json" ? json_text : report);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_verify_stage(const Settings& s, std::size_t i, std::ostream& out)
{
    check_stage_gate(s, i);
    const RingSpec ring = load_ring(s.ring, s.p);
    const StageOptions opt = stage_options(s);
    const ResidueResolution res = resolve_residue_field(ring.algebra, i + 1);
    const Vec a = choose_a(res.injective);
    const Vec b = choose_b(res.injective);
    const StageCertificate c = verify_stage(build_stage(res, i, a, b, opt), opt);
    std::string report = "ring " + ring.label + " over F_" + std::to_string(ring.algebra.field().p()) + "\n" + stage_report(c);
    bool good = c.all_ok();
    if (s.sweep_b) {
        const bool swept = sweep_socle_choices(res, i, opt);
        report += std::string("  sweep over b  ") + ok(swept) + " (" + std::to_string(socle_choices(res.injective).size())
                  + " socle choices)\n";
        good = good && swept;
    }
    emit(s, out, to_json(c), report);
    if (!good)
        throw VerificationFailure("stage " + std::to_string(i) + " did not verify");
    return exit_ok;
}

int cmd_verify_theorem(const Settings& s, std::size_t i_max, std::ostream& out)
{
    if (i_max == 0)
        throw UsageFailure("--imax must be at least 1");
    check_stage_gate(s, i_max);
    const RingSpec ring = load_ring(s.ring, s.p);
    TheoremOptions opt{i_max, stage_options(s), lemma_options(s), std::max<std::size_t>(1, s.jobs)};
    const GlobalCertificate g = verify_theorem(ring, opt);
    std::string report = theorem_report(g);
    bool good = true;
    if (s.sweep_b) {
        const ResidueResolution res = resolve_residue_field(ring.algebra, i_max + 1);
        for (std::size_t i = 1; i <= i_max; ++i) {
            const bool swept = sweep_socle_choices(res, i, opt.stage);
            report += "sweep over b, stage " + std::to_string(i) + ": " + ok(swept) + "\n";
            good = good && swept;
        }
    }
    emit(s, out, to_json(g), report);
    if (!good)
        throw VerificationFailure("a socle choice of b failed to give an obstruction");
    return exit_ok;
}

int cmd_verify_lemma(const Settings& s, const std::string& left, const std::string& right, std::ostream& out)
{
    const RingSpec l = load_ring(left, s.p);
    const RingSpec r = load_ring(right, s.p);
    const Lemma21Report rep = verify_lemma21_instance(l.algebra, r.algebra, l.label, r.label, lemma_options(s));
    emit(s, out, to_json(rep), lemma_report(rep));
    if (!rep.ok())
        throw VerificationFailure("envelope check failed");
    return exit_ok;
}

int cmd_resolve(const Settings& s, std::size_t length, std::ostream& out)
{
    if (length == 0)
        throw UsageFailure("--length must be at least 1");
    const RingSpec ring = load_ring(s.ring, s.p);
    const ResidueResolution res = resolve_residue_field(ring.algebra, length);
    const CochainComplex& inj = res.injective.complex;
    json j;
    j["ring"] = ring.label;
    j["p"] = ring.algebra.field().p();
    j["ring_hash"] = ring.hash;
    j["length"] = length;
    j["ranks"] = res.free.ranks;
    j["minimal"] = res.free.is_minimal();
    json dims = json::array(), coh = json::array(), hashes = json::array();
    const Backend backend = parse_backend(s.backend);
    for (int t = 0; t <= inj.hi(); ++t) {
        dims.push_back(inj.dim(t));
        // the top degree is cut off, so its cohomology is not meaningful
        if (t < inj.hi())
            coh.push_back(cohomology_dim(inj, t, backend));
    }
    for (const auto& d : res.free.differentials)
        hashes.push_back(hash_matrix(d));
    j["injective_dims"] = dims;
    j["injective_cohomology"] = coh;
    j["differential_hashes"] = hashes;

    std::ostringstream o;
    o << "minimal free resolution of k over " << ring.label << " (F_" << ring.algebra.field().p() << ", dim "
      << ring.algebra.dim() << ")\n";
    o << "  ranks P_0..P_" << length << ":";
    for (auto r : res.free.ranks)
        o << " " << r;
    o << "\n  minimal: " << (res.free.is_minimal() ? "yes" : "NO") << "\n";
    o << "  dim I^0..I^" << length << ":";
    for (const auto& d : dims)
        o << " " << d;
    o << "\n  dim H^0..H^" << length - 1 << "(I):";
    for (const auto& h : coh)
        o << " " << h;
    o << "\n";
    for (std::size_t k = 0; k < res.free.differentials.size(); ++k)
        o << "  sha256 d_" << k + 1 << "  " << short_hash(hashes[k].get<std::string>()) << "\n";
    emit(s, out, dump(j), o.str());
    bool good = res.free.is_minimal() && !coh.empty() && coh[0] == 1;
    for (std::size_t t = 1; t < coh.size(); ++t)
        good = good && coh[t] == 0;
    if (!good)
        throw VerificationFailure("resolution is not a minimal resolution of k");
    return exit_ok;
}

int cmd_remark_checks(const Settings& s, std::size_t n_max, std::size_t truncation_max, std::ostream& out)
{
    const RingSpec ring = load_ring(s.ring, s.p);
    const RemarkReport rep = remark_checks(ring.algebra, n_max, truncation_max);
    json j;
    j["ring"] = ring.label;
    j["p"] = ring.algebra.field().p();
    j["n_max"] = n_max;
    j["truncation_max"] = truncation_max;
    json checks = json::array();
    std::ostringstream o;
    o << "finite sums of shifts of k over " << ring.label << "\n";
    for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        o << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << " [" << c.detail << "]\n";
    }
    j["checks"] = checks;
    j["all_passed"] = rep.all_passed();
    emit(s, out, dump(j), o.str());
    if (!rep.all_passed())
        throw VerificationFailure("a finite-sum identity failed");
    return exit_ok;
}

void strip_timings(GlobalCertificate& g)
{
    g.seconds.reset();
    for (auto& c : g.stages)
        c.seconds.reset();
}

int cmd_check_certificate(const Settings& s, const std::string& path, std::ostream& out)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageFailure("cannot read '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    GlobalCertificate claimed;
    try {
        claimed = global_certificate_from_json(text.str());
    } catch (const Error& e) {
        throw VerificationFailure(std::string("certificate rejected: ") + e.what());
    }
    if (claimed.i_max == 0 || claimed.stages.empty())
        throw VerificationFailure("certificate has no stages");
    check_stage_gate(s, claimed.i_max);
    RingSpec ring = [&] {
        try {
            return load_ring(claimed.ring, claimed.p);
        } catch (const Error& e) {
            throw VerificationFailure(std::string("certificate names an unusable ring: ") + e.what());
        }
    }();
    if (ring.hash != claimed.ring_hash)
        throw VerificationFailure("ring hash does not match ring '" + claimed.ring + "'");

    TheoremOptions opt{claimed.i_max, stage_options(s), lemma_options(s), std::max<std::size_t>(1, s.jobs)};
    opt.stage.route = route_of(claimed.stages.front().route);
    opt.stage.cross_check = claimed.stages.front().route != "full";
    opt.stage.record_timings = false;
    GlobalCertificate fresh;
    try {
        fresh = verify_theorem(ring, opt);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::resource_budget_exceeded)
            throw;
        throw VerificationFailure(std::string("re-running the certificate failed: ") + e.what());
    }
    strip_timings(claimed);
    strip_timings(fresh);

    std::vector<std::string> mismatches;
    if (claimed.schema != fresh.schema || claimed.version != fresh.version)
        mismatches.push_back("schema/version");
    for (std::size_t k = 0; k < std::max(claimed.stages.size(), fresh.stages.size()); ++k)
        if (k >= claimed.stages.size() || k >= fresh.stages.size() || !(claimed.stages[k] == fresh.stages[k]))
            mismatches.push_back("stage " + std::to_string(k + 1));
    if (claimed.lemma21 != fresh.lemma21)
        mismatches.push_back("envelope reports");
    if (claimed.disjoint != fresh.disjoint)
        mismatches.push_back("disjoint");
    if (claimed.inference != fresh.inference)
        mismatches.push_back("inference");
    if (!(claimed == fresh) && mismatches.empty())
        mismatches.push_back("metadata");

    json j{{"input", path}, {"reproduced", mismatches.empty()}, {"mismatches", mismatches}};
    std::string report = "certificate " + path + ": ";
    if (mismatches.empty()) {
        report += "reproduced exactly (" + std::to_string(claimed.i_max) + " stages, ring " + claimed.ring + ")\n";
    } else {
        report += "DOES NOT REPRODUCE\n";
        for (const auto& m : mismatches)
            report += "  differs: " + m + "\n";
    }
    emit(s, out, dump(j), report);
    if (!mismatches.empty())
        throw VerificationFailure("certificate does not match a fresh run");
    return exit_ok;
}

} // namespace

GlobalCertificate verify_theorem(const RingSpec& ring, const TheoremOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    const ResidueResolution res = resolve_residue_field(ring.algebra, options.i_max + 1);
    const Vec a = choose_a(res.injective);
    const Vec b = choose_b(res.injective);

    std::vector<std::optional<StageCertificate>> results(options.i_max);
    std::vector<std::exception_ptr> errors(options.i_max);
    std::atomic<std::size_t> next{1};
    auto worker = [&] {
        for (std::size_t i = next++; i <= options.i_max; i = next++) {
            try {
                results[i - 1] = verify_stage(build_stage(res, i, a, b, options.stage), options.stage);
            } catch (...) {
                errors[i - 1] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::min(options.jobs, options.i_max); ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<StageCertificate> stages;
    for (auto& r : results)
        stages.push_back(std::move(*r));
    std::vector<Lemma21Report> lemma{verify_lemma21_instance(ring.algebra, ring.algebra, ring.label, ring.label, options.lemma)};
    GlobalCertificate g = assemble_global_certificate(std::move(stages), std::move(lemma),
                                                      {ring.algebra.field().p(), ring.label, ring.hash, options.i_max});
    if (options.stage.record_timings)
        g.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return g;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Settings s;
    CLI::App app{"Finite-stage certificates for a non-left-complete derived category"};
    app.name("homcert");
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--p", s.p, "Characteristic of the ground field (presets only)")->check(CLI::Range(2u, PrimeField::max_characteristic));
    app.add_option("--ring", s.ring, "Ring preset (trunc:e, field, sqzero:r, trunc2:e1,e2) or path to a ring-spec JSON file");
    app.add_option("--backend", s.backend, "Linear algebra backend")->check(CLI::IsMember({"auto", "dense", "sparse"}));
    app.add_option("--route", s.route, "Preimage route for stage checks")->check(CLI::IsMember({"auto", "full", "localized"}));
    app.add_option("--memory-budget", s.memory_mib, "Memory budget in MiB")->envname("HOMCERT_MEMORY_BUDGET")->check(CLI::PositiveNumber);
    app.add_option("--baer-ideal-budget", s.baer_ideals, "Maximum number of ideals enumerated by the Baer test")
        ->check(CLI::PositiveNumber);
    app.add_option("--output", s.output, "Write the JSON document to this path");
    app.add_option("--format", s.format, "What to print on stdout")->check(CLI::IsMember({"report", "json"}));
    app.add_option("--jobs", s.jobs, "Stages verified concurrently")->check(CLI::PositiveNumber);
    app.add_flag("--timings", s.timings, "Record wall-clock seconds (makes output nondeterministic)");
    app.add_flag("--sweep-b", s.sweep_b, "Repeat each stage for every nonzero socle choice of b");
    app.add_flag("--allow-stage3", s.allow_stage3, "Permit stages i >= 3");

    std::size_t stage_i = 1, i_max = 2, length = 4, n_max = 8, truncation_max = 6;
    std::string left, right, input;
    auto* stage = app.add_subcommand("verify-stage", "Verify one stage and print its certificate");
    stage->add_option("--i", stage_i, "Stage index")->required()->check(CLI::PositiveNumber);
    auto* theorem = app.add_subcommand("verify-theorem", "Verify stages 1..imax and assemble the global certificate");
    theorem->add_option("--imax", i_max, "Number of stages")->check(CLI::PositiveNumber);
    auto* lemma = app.add_subcommand("verify-lemma21", "Check Hom_k(R (x) S, k) against Hom_k(R, k) (x) Hom_k(S, k)");
    lemma->add_option("--left", left, "Ring R")->required();
    lemma->add_option("--right", right, "Ring S")->required();
    auto* resolve = app.add_subcommand("resolve", "Minimal free and injective resolutions of k");
    resolve->add_option("--length", length, "Resolution length")->check(CLI::PositiveNumber);
    auto* remark = app.add_subcommand("remark-checks", "Cohomology of finite sums of shifts of k and their truncations");
    remark->add_option("--nmax", n_max, "Largest number of summands")->check(CLI::PositiveNumber);
    remark->add_option("--truncation-max", truncation_max, "Largest N in the truncation check");
    auto* check = app.add_subcommand("check-certificate", "Re-run a global certificate and compare it byte for byte");
    check->add_option("--input", input, "Certificate JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*stage)
            return cmd_verify_stage(s, stage_i, out);
        if (*theorem)
            return cmd_verify_theorem(s, i_max, out);
        if (*lemma)
            return cmd_verify_lemma(s, left, right, out);
        if (*resolve)
            return cmd_resolve(s, length, out);
        if (*remark)
            return cmd_remark_checks(s, n_max, truncation_max, out);
        if (*check)
            return cmd_check_certificate(s, input, out);
    } catch (const VerificationFailure& e) {
        err << "homcert: verification failed: " << e.what() << "\n";
        return exit_verification;
    } catch (const UsageFailure& e) {
        err << "homcert: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        err << "homcert: " << e.what() << "\n";
        switch (e.code()) {
        case ErrorCode::not_a_cycle:
        case ErrorCode::not_a_boundary:
        case ErrorCode::incomplete_stages:
            return exit_verification;
        default:
            return exit_usage;
        }
    } catch (const std::bad_alloc&) {
        err << "homcert: out of memory; lower the stage or raise --memory-budget\n";
        return exit_usage;
    }
    return exit_usage;
}

} // namespace homcert
