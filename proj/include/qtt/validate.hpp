#pragma once

#include <string>
#include <vector>

namespace qtt {

/// One check of the built-in verification suite.
struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail; // measured numbers, worst cases, counts
    double seconds = 0.0;
};

/// Runs the full verification suite (free-propagation identity,
/// unitarity, closed form vs linear system, analytic vs numeric time,
/// the two-form equivalence, the v1 -> 0 real-barrier limit, width
/// saturation and its suppression under absorption, limiting-speed
/// scaling, and the derivative identities). Deterministic: all random
/// draws are fixed-seed.
std::vector<CheckResult> run_validation_suite();

} // namespace qtt
