#pragma once

// End-to-end verification suite.  Each criterion runs a pinned scenario with
// tolerances fixed in code, produces a deterministic multi-line table, and a
// pass flag.  The determinism criterion reruns the others and compares the
// concatenated tables byte for byte, so tables must never contain timings,
// timestamps, or addresses; wall time lives in the separate ms field.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hdistlab/symbols.hpp"

namespace hdistlab {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string table;  // deterministic, newline-separated key = value lines
    double ms = 0.0;    // wall time, excluded from the table
};

struct AcceptanceSummary {
    std::vector<CriterionResult> results;
    bool all_pass = true;
};

// run criteria whose names contain `filter` (empty runs all)
AcceptanceSummary verify(const std::string& filter = "");

std::vector<std::string> criterion_names();

// the projection-invariant battery against an arbitrary projection
// implementation, so a deliberately broken one is observable as a failure
using ProjectionFn =
    std::function<std::vector<double>(std::span<const double>, const MultiOrder&)>;

bool projection_invariant_holds(const ProjectionFn& project, const MultiOrder& alpha,
                                int samples, std::uint64_t seed, double tol,
                                std::string* note = nullptr);

}  // namespace hdistlab
