#include "homcert/certificate.hpp"

#include "homcert/error.hpp"

#include "json.hpp"

namespace homcert {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* name)
{
    if (!j.is_object() || !j.contains(name))
        throw Error(ErrorCode::validation_error, std::string("missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::validation_error, std::string("field '") + name + "' has the wrong type");
    }
}

template <class T>
std::optional<T> optional_field(const json& j, const char* name)
{
    if (!j.contains(name) || j.at(name).is_null())
        return std::nullopt;
    return field<T>(j, name);
}

template <class T>
json optional_json(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

json parse(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::parse_error, std::string("certificate is not valid JSON: ") + e.what());
    }
}

json stage_json(const StageCertificate& c)
{
    json dims = json::array();
    for (const auto& [deg, d] : c.window_dims)
        dims.push_back({{"degree", deg}, {"dim", d}});
    json witnesses = json::array();
    for (const auto& w : c.witnesses)
        witnesses.push_back({{"candidate", w.candidate}, {"slot", w.slot}, {"generator", w.generator}, {"hash", w.hash}});
    json proof = nullptr;
    if (c.rank_proof)
        proof = {{"rows", c.rank_proof->rows},
                 {"cols", c.rank_proof->cols},
                 {"rank", c.rank_proof->rank},
                 {"augmented_rank", c.rank_proof->augmented_rank}};
    return {{"stage", c.stage},
            {"n", c.n},
            {"s_i", c.s_i},
            {"window_dims", dims},
            {"lambda_index", c.lambda_index},
            {"lambda_diagram", c.lambda_diagram},
            {"lambda_degree", c.lambda_degree},
            {"cycle_ok", c.cycle_ok},
            {"lambda_active_factors", c.lambda_active_factors},
            {"profile_ok", c.profile_ok},
            {"boundary_exists", c.boundary_exists},
            {"boundary_dim", c.boundary_dim},
            {"obstruction_ok", c.obstruction_ok},
            {"route", c.route},
            {"routes_agree", c.routes_agree},
            {"candidate_count", optional_json(c.candidate_count)},
            {"witnesses", witnesses},
            {"rank_proof", proof},
            {"hashes", c.hashes},
            {"seconds", optional_json(c.seconds)}};
}

StageCertificate stage_from(const json& j)
{
    StageCertificate c;
    c.stage = field<std::size_t>(j, "stage");
    c.n = field<std::size_t>(j, "n");
    c.s_i = field<std::vector<std::size_t>>(j, "s_i");
    for (const auto& d : field<json>(j, "window_dims"))
        c.window_dims[field<int>(d, "degree")] = field<std::size_t>(d, "dim");
    c.lambda_index = field<std::vector<int>>(j, "lambda_index");
    c.lambda_diagram = field<std::string>(j, "lambda_diagram");
    c.lambda_degree = field<int>(j, "lambda_degree");
    c.cycle_ok = field<bool>(j, "cycle_ok");
    c.lambda_active_factors = field<std::vector<std::size_t>>(j, "lambda_active_factors");
    c.profile_ok = field<bool>(j, "profile_ok");
    c.boundary_exists = field<bool>(j, "boundary_exists");
    c.boundary_dim = field<std::size_t>(j, "boundary_dim");
    c.obstruction_ok = field<bool>(j, "obstruction_ok");
    c.route = field<std::string>(j, "route");
    c.routes_agree = field<bool>(j, "routes_agree");
    c.candidate_count = optional_field<std::size_t>(j, "candidate_count");
    for (const auto& w : field<json>(j, "witnesses"))
        c.witnesses.push_back({field<std::size_t>(w, "candidate"), field<std::size_t>(w, "slot"), field<std::size_t>(w, "generator"),
                               field<std::string>(w, "hash")});
    if (const auto proof = optional_field<json>(j, "rank_proof"))
        c.rank_proof = RankProof{field<std::size_t>(*proof, "rows"), field<std::size_t>(*proof, "cols"),
                                 field<std::size_t>(*proof, "rank"), field<std::size_t>(*proof, "augmented_rank")};
    c.hashes = field<std::map<std::string, std::string>>(j, "hashes");
    c.seconds = optional_field<double>(j, "seconds");
    return c;
}

json lemma_json(const Lemma21Report& r)
{
    return {{"left", r.left},
            {"right", r.right},
            {"p", r.p},
            {"dim_left", r.dim_left},
            {"dim_right", r.dim_right},
            {"dim_tensor", r.dim_tensor},
            {"dim_envelope", r.dim_envelope},
            {"socle_dim", r.socle_dim},
            {"baer", r.baer},
            {"baer_ideals", r.baer_ideals},
            {"baer_note", r.baer_note},
            {"isomorphism_found", r.isomorphism_found},
            {"isomorphism_hash", r.isomorphism_hash}};
}

Lemma21Report lemma_from(const json& j)
{
    Lemma21Report r;
    r.left = field<std::string>(j, "left");
    r.right = field<std::string>(j, "right");
    r.p = field<std::uint32_t>(j, "p");
    r.dim_left = field<std::size_t>(j, "dim_left");
    r.dim_right = field<std::size_t>(j, "dim_right");
    r.dim_tensor = field<std::size_t>(j, "dim_tensor");
    r.dim_envelope = field<std::size_t>(j, "dim_envelope");
    r.socle_dim = field<std::size_t>(j, "socle_dim");
    r.baer = field<std::string>(j, "baer");
    r.baer_ideals = field<std::size_t>(j, "baer_ideals");
    r.baer_note = field<std::string>(j, "baer_note");
    r.isomorphism_found = field<bool>(j, "isomorphism_found");
    r.isomorphism_hash = field<std::string>(j, "isomorphism_hash");
    return r;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace

std::string to_json(const StageCertificate& c) { return dump(stage_json(c)); }
std::string to_json(const Lemma21Report& r) { return dump(lemma_json(r)); }

std::string to_json(const GlobalCertificate& c)
{
    json stages = json::array();
    for (const auto& s : c.stages)
        stages.push_back(stage_json(s));
    json lemma = json::array();
    for (const auto& r : c.lemma21)
        lemma.push_back(lemma_json(r));
    return dump({{"schema", c.schema},
                 {"version", c.version},
                 {"p", c.p},
                 {"ring", c.ring},
                 {"ring_hash", c.ring_hash},
                 {"i_max", c.i_max},
                 {"stages", stages},
                 {"lemma21", lemma},
                 {"disjoint", c.disjoint},
                 {"inference", c.inference},
                 {"seconds", optional_json(c.seconds)}});
}

StageCertificate stage_certificate_from_json(std::string_view text) { return stage_from(parse(text)); }
Lemma21Report lemma21_report_from_json(std::string_view text) { return lemma_from(parse(text)); }

GlobalCertificate global_certificate_from_json(std::string_view text)
{
    const json j = parse(text);
    GlobalCertificate c;
    c.schema = field<std::string>(j, "schema");
    if (c.schema != certificate_schema)
        throw Error(ErrorCode::validation_error, "unknown certificate schema '" + c.schema + "'");
    c.version = field<std::string>(j, "version");
    c.p = field<std::uint32_t>(j, "p");
    c.ring = field<std::string>(j, "ring");
    c.ring_hash = field<std::string>(j, "ring_hash");
    c.i_max = field<std::size_t>(j, "i_max");
    for (const auto& s : field<json>(j, "stages"))
        c.stages.push_back(stage_from(s));
    for (const auto& r : field<json>(j, "lemma21"))
        c.lemma21.push_back(lemma_from(r));
    c.disjoint = field<bool>(j, "disjoint");
    c.inference = field<std::vector<std::string>>(j, "inference");
    c.seconds = optional_field<double>(j, "seconds");
    return c;
}

} // namespace homcert
