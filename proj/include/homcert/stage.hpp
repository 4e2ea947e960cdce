#pragma once

#include "homcert/baer.hpp"
#include "homcert/certificate.hpp"
#include "homcert/resolution.hpp"
#include "homcert/tensor_window.hpp"

#include <memory>
#include <string>
#include <vector>

namespace homcert {

enum class Route { automatic, full, localized };

struct StageOptions {
    Backend backend = Backend::automatic;
    Route route = Route::automatic;
    /// Solve the same stage through both routes when the full one is feasible.
    bool cross_check = true;
    /// `automatic` uses the full route while dim J^i stays at or below this.
    std::size_t full_route_max_dim = 20000;
    std::size_t memory_budget = std::size_t{2} << 30;
    /// Enumerate preimage candidates when there are at most this many.
    std::size_t enumeration_limit = std::size_t{1} << 16;
    bool record_timings = false;
};

/// R_1, its minimal resolution of k and the dual injective resolution.
struct ResidueResolution {
    FiniteDimAlgebra r1;
    FreeResolution free;
    InjectiveResolution injective;
};

/// Minimal resolution of k of the given length, dualized against Hom_k(R_1, k).
ResidueResolution resolve_residue_field(const FiniteDimAlgebra& r1, std::size_t length);

/// The nonzero element spanning the image of k -> I^0. Throws
/// ResolutionInvalid unless H^0 is k and the image is one-dimensional.
Vec choose_a(const InjectiveResolution& i);
/// First reduced echelon socle vector of I^1. Throws ProjectiveResidue when
/// I^1 = 0 and SocleEmpty when I^1 has no socle.
Vec choose_b(const InjectiveResolution& i);
/// Every nonzero element of the socle of I^1. Throws BudgetExceeded above `limit`.
std::vector<Vec> socle_choices(const InjectiveResolution& i, std::size_t limit = 4096);

std::size_t stage_n(std::size_t i) noexcept;
/// S_i = {i^2 + 1, ..., i^2 + i}.
std::vector<std::size_t> stage_slots(std::size_t i);

struct StageData {
    std::size_t i = 0;
    std::size_t n = 0;
    std::vector<std::size_t> s_i;
    FiniteDimAlgebra r1;
    std::vector<AlgebraMorphism> embeddings; ///< embeddings[j-1] = Phi_j : R_1 -> R_n
    std::shared_ptr<const TensorPowerWindow> window;
    Vec a;
    Vec b;
    std::vector<int> lambda_index;
    Cochain lambda;
};

/// Window J_n^{i-1..i+1} and lambda_i = a^{(x) i^2} (x) b^{(x) i} in the
/// summand indexed by the indicator of S_i. Throws InvalidArgument when the
/// resolution is shorter than i + 1 and ResourceBudgetExceeded when the
/// estimated memory exceeds the budget.
StageData build_stage(const ResidueResolution& res, std::size_t i, const Vec& a, const Vec& b, const StageOptions& options = {});

/// Estimated peak bytes for verifying stage i.
std::size_t estimate_stage_memory(const TensorPowerWindow& w, int degree);

/// Checks d lambda = 0, that every Phi_j(m) kills lambda, that lambda is a
/// boundary, and that no preimage is killed by Phi_j(m) for all j in S_i.
/// Throws NotACycle / NotABoundary, which valid inputs never trigger.
StageCertificate verify_stage(const StageData& s, const StageOptions& options = {});

/// Runs the stage once per nonzero socle choice of b; true when every run
/// certifies the obstruction.
bool sweep_socle_choices(const ResidueResolution& res, std::size_t i, const StageOptions& options = {});

struct Lemma21Options {
    BaerBudget baer;
};

/// Socle, Baer test, dimensions and an explicit isomorphism
/// Hom_k(R (x) S, k) ~ Hom_k(R, k) (x) Hom_k(S, k). Throws FieldMismatch.
Lemma21Report verify_lemma21_instance(const FiniteDimAlgebra& r, const FiniteDimAlgebra& s, const std::string& left_label,
                                      const std::string& right_label, const Lemma21Options& options = {});

struct GlobalMetadata {
    std::uint32_t p = 0;
    std::string ring;
    std::string ring_hash;
    std::size_t i_max = 0;
};

/// Throws IncompleteStages unless stages 1..i_max are all present and fully
/// verified, the S_i are pairwise disjoint and every envelope report holds.
GlobalCertificate assemble_global_certificate(std::vector<StageCertificate> stages, std::vector<Lemma21Report> lemma21,
                                              const GlobalMetadata& meta);

struct RemarkCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct RemarkReport {
    std::vector<RemarkCheck> checks;
    bool all_passed() const noexcept;
};

/// Finite sums of shifts A[i] with A = k, modelled both by k itself and by its
/// injective resolution: H^0 of the sums over i = 1..n vanishes, H^0 splits
/// over a division of the index range, H^{-i} of the sum over 0..N is A, and
/// truncations tau^{>= -n} of the sum over 0..N match the sum over 0..n.
RemarkReport remark_checks(const FiniteDimAlgebra& r1, std::size_t n_max, std::size_t truncation_max = 6);

} // namespace homcert
