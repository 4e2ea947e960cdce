#pragma once

#include "homcert/ring_spec.hpp"
#include "homcert/stage.hpp"

#include <iosfwd>

namespace homcert {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,        ///< bad arguments, unreadable input, resource limits, hypothesis violations
    exit_verification = 2, ///< a verification flag failed or a certificate does not reproduce
};

struct TheoremOptions {
    std::size_t i_max = 2;
    StageOptions stage;
    Lemma21Options lemma;
    std::size_t jobs = 1;
};

/// Resolves k over the ring, verifies stages 1..i_max (up to `jobs` at a
/// time), checks the envelope of R_1 (x) R_1 and assembles the certificate.
/// Throws ProjectiveResidue before any stage runs when I^1 = 0.
GlobalCertificate verify_theorem(const RingSpec& ring, const TheoremOptions& options);

/// Runs the command line in-process; reports go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace homcert
