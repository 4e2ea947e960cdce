#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace homcert {

inline constexpr std::string_view certificate_schema = "homcert.certificate/1";
inline constexpr std::string_view homcert_version = "1.0.0";

/// A preimage candidate together with the first (slot, generator) pair
/// whose action does not kill it.
struct CandidateWitness {
    std::size_t candidate = 0;
    std::size_t slot = 0;      ///< j in S_i
    std::size_t generator = 0; ///< index into the maximal ideal basis of R_1
    std::string hash;          ///< hash of the candidate vector

    friend bool operator==(const CandidateWitness&, const CandidateWitness&) = default;
};

/// rank [d; B | rhs] = rank [d; B] + 1 on the connected part of the joint
/// system meeting supp(rhs): the system d mu = lambda, B mu = 0 is inconsistent.
struct RankProof {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t rank = 0;
    std::size_t augmented_rank = 0;

    friend bool operator==(const RankProof&, const RankProof&) = default;
};

struct StageCertificate {
    std::size_t stage = 0;
    std::size_t n = 0;
    std::vector<std::size_t> s_i;
    std::map<int, std::size_t> window_dims; ///< degree -> dim J^t_n
    std::vector<int> lambda_index;
    std::string lambda_diagram;             ///< slot diagram such as "a a a a | b b"
    int lambda_degree = 0;

    bool cycle_ok = false;
    std::vector<std::size_t> lambda_active_factors; ///< empty when every Phi_j(m) kills lambda
    bool profile_ok = false;
    bool boundary_exists = false;
    std::size_t boundary_dim = 0;           ///< dimension of the affine preimage set
    bool obstruction_ok = false;

    std::string route;                      ///< "full", "localized" or "full+localized"
    bool routes_agree = true;
    std::optional<std::size_t> candidate_count;
    std::vector<CandidateWitness> witnesses;
    std::optional<RankProof> rank_proof;
    std::map<std::string, std::string> hashes;
    std::optional<double> seconds;

    bool all_ok() const noexcept { return cycle_ok && profile_ok && boundary_exists && obstruction_ok && routes_agree; }

    friend bool operator==(const StageCertificate&, const StageCertificate&) = default;
};

struct Lemma21Report {
    std::string left;
    std::string right;
    std::uint32_t p = 0;
    std::size_t dim_left = 0;     ///< dim E_R
    std::size_t dim_right = 0;    ///< dim E_S
    std::size_t dim_tensor = 0;   ///< dim E_R (x) E_S
    std::size_t dim_envelope = 0; ///< dim E_{R (x) S}
    std::size_t socle_dim = 0;    ///< socle of E_R (x) E_S
    std::string baer;             ///< "pass", "fail" or "skipped"
    std::size_t baer_ideals = 0;
    std::string baer_note;
    bool isomorphism_found = false;
    std::string isomorphism_hash;

    bool ok() const noexcept
    {
        return dim_tensor == dim_left * dim_right && dim_envelope == dim_tensor && socle_dim == 1 && baer != "fail"
               && isomorphism_found;
    }

    friend bool operator==(const Lemma21Report&, const Lemma21Report&) = default;
};

struct GlobalCertificate {
    std::string schema{certificate_schema};
    std::string version{homcert_version};
    std::uint32_t p = 0;
    std::string ring;
    std::string ring_hash;
    std::size_t i_max = 0;
    std::vector<StageCertificate> stages;
    std::vector<Lemma21Report> lemma21;
    bool disjoint = false;
    std::vector<std::string> inference;
    std::optional<double> seconds;

    friend bool operator==(const GlobalCertificate&, const GlobalCertificate&) = default;
};

/// Canonical JSON text (two-space indent, keys sorted, trailing newline).
std::string to_json(const StageCertificate& c);
std::string to_json(const Lemma21Report& r);
std::string to_json(const GlobalCertificate& c);

/// Throw ParseError on malformed text and ValidationError on a wrong schema
/// or missing field.
StageCertificate stage_certificate_from_json(std::string_view text);
Lemma21Report lemma21_report_from_json(std::string_view text);
GlobalCertificate global_certificate_from_json(std::string_view text);

} // namespace homcert
