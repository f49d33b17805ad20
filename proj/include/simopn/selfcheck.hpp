#pragma once

// End-to-end verification suite exposed through the CLI.  Each check
// exercises an independent route to a quantity the library computes in
// closed form (quadrature against series, sampled moments against formulas)
// and reports a pass/fail with a diagnostic detail string.

#include <cstdint>
#include <string>
#include <vector>

namespace simopn {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Runs the verification suite.  `quick` trades sample sizes for speed (the
// thresholds stay the same).  All randomness derives from `seed`.
std::vector<CheckResult> run_verification(std::uint64_t seed, bool quick);

}  // namespace simopn
