#pragma once

// Experiment driver.  Takes a sequence pair with its interaction form and
// optional constraint, runs the hypothesis checks, the pairing estimator,
// and the consistency analysis, and condenses everything into a verdict:
//
//   confirms-equality          the interaction limit matches q(weak limits)
//   confirms-inequality        a sign-definite defect survives the limit
//   counterexample-reproduced  truncated pairings vanish yet the raw defect
//                              persists and no dominating envelope exists
//   inconclusive               anything else
//
// Verdicts are computed by a pure function so the gate logic is testable in
// isolation.

#include <optional>
#include <string>
#include <vector>

#include "hdistlab/hdist.hpp"

namespace hdistlab {

struct Tolerances {
    double defect_rel = 5e-3;      // defect negligible below this, relative to scale
    double residual_rel = 1e-2;    // generic residual comparisons
    double constraint_norm = 1e-10;  // what an exactly-constrained family must meet
    double strong_zero = 1e-10;    // strong consistency zero band
    double hypothesis_norm = 1e-8;  // localization residual accepted outright
};

struct ChecklistItem {
    std::string label;
    bool ok = true;
    std::string note;
};

struct DefectRow {
    std::string phi;
    cplx value{0.0};  // extrapolated < q(u_r, v_r) - q(u, v), phi >
    double error = 0.0;
    bool converged = true;
    double scale = 1.0;  // C_u C_v max|phi|, the comparison yardstick
};

struct ExperimentConfig {
    std::string name = "experiment";
    MultiOrder alpha;
    std::vector<double> schedule;
    std::vector<double> levels;
    std::vector<TestFunction> phis;
    std::vector<Symbol> psis;
    double p = 2.0;  // declared exponents, reporting only
    double q = 2.0;
    int jobs = 1;
    bool enforce_hypothesis = true;
    int consistency_samples = 64;
    Tolerances tol;
};

struct ExperimentReport {
    std::string name;
    std::string verdict;
    int exit_code = 2;
    std::vector<std::string> reasons;
    std::vector<ChecklistItem> checklist;
    double p = 2.0, q = 2.0, p_conj = 2.0, q_conj = 2.0;
    bool classical_l2 = false;
    bool domination_ok = false;
    bool constraint_ok = true;
    std::optional<ConsistencyResult> consistency;
    std::optional<LocalizationResult> localization;
    StrongConsistencyResult strong;
    std::vector<DefectRow> defects;
    HDistEstimate estimate;
};

// the gate logic, pure; reasons (when given) collects one line per decision
std::string decide_verdict(bool constraint_ok, bool domination_ok, bool strong_all_zero,
                           bool strong_nonnegative, bool defect_negligible,
                           bool defect_beyond, bool defect_positive,
                           std::vector<std::string>* reasons = nullptr);
int exit_code_for(const std::string& verdict);

ExperimentReport run_compcomp(const ExperimentSetup& setup, const ExperimentConfig& config);

// Truncation-split decomposition of the defect at a fixed level l:
//   tail        < q(u_r, v_r - T_l v_r), phi >          heavy-tail term
//   hdist       < q(u_r - u, T_l v_r), phi >            pairing against T_l
//   bias        < q(u, h_l - v), phi >                  truncated-limit bias,
//               with h_l known only through its pairings (extrapolated)
//   weak_drift  residual of < q(u, v_r), phi > -> < q(u, v), phi >
// The four extrapolants plus the (identically zero) centering term sum to
// the raw defect exactly, Richardson being linear; sum_gap records the
// rounding left over.  tail_norms tracks max_m || phi (v_r - T_l v_r)_m ||_q'
// along the schedule, the quantity a dominating envelope would crush.
struct OptimalTermRow {
    std::string phi;
    double level = 0.0;
    cplx tail{0.0}, hdist{0.0}, bias{0.0}, weak_drift{0.0};
    cplx sum{0.0};
    cplx raw_defect{0.0};
    double sum_gap = 0.0;
    std::vector<double> tail_norms;
    bool tail_vanishing = false;
};

struct OptimalVariantReport {
    std::string name;
    std::vector<double> schedule;
    std::vector<double> levels;
    std::vector<OptimalTermRow> rows;
    std::vector<ChecklistItem> checklist;
    bool domination_ok = false;
};

OptimalVariantReport run_optimal_variant(const ExperimentSetup& setup,
                                         const ExperimentConfig& config);

// spectral energy pairing against the adjoint first-axis derivative
// smoothing symbol,
//   sum_xi conj(2 pi i xi_0) (1 - theta) psi(pi_P(xi)) / rho(xi) |F(phi u)(xi)|^2;
// cancels to rounding over +-xi for real phi u and even real psi.  scale is
// the same sum with every factor in absolute value.
struct CommutatorPairing {
    cplx value{0.0};
    double scale = 0.0;
};

CommutatorPairing commutator_pairing(const Field& u, const Field& phi_field,
                                     const Symbol& psi, const MultiOrder& alpha,
                                     const CutoffSpec& cutoff = {});

}  // namespace hdistlab
