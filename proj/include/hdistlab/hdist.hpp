#pragma once

// Pairing estimator for the bilinear defect measures, plus the localization
// residual and wave-cone consistency checks experiments are judged by.
//
// The estimated object is, per component pair (j, m) and test pair (phi, psi),
//   mu[j,m](phi, psi) = lim_r  < phi (u_r - u)_j , A_psi T_l (v_r - v)_m >
// where A_psi is the Fourier multiplier psi(project_to_P(xi)) and T_l the
// truncation at level l.  Ladders run over the schedule r, Richardson
// extrapolated in 1/r, then combined over the truncation levels l.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hdistlab/constraints.hpp"
#include "hdistlab/extrapolate.hpp"
#include "hdistlab/multipliers.hpp"
#include "hdistlab/sequences.hpp"
#include "hdistlab/spectral_core.hpp"
#include "hdistlab/symbols.hpp"

namespace hdistlab {

struct TestFunction {
    std::string label;
    std::function<cplx(std::span<const double>)> eval;  // smooth on the torus

    Field materialize(const Grid& grid) const;
};

// periodized gaussian bump, the workhorse test function
TestFunction gaussian_test(std::vector<double> center, double sigma, double amplitude = 1.0);
TestFunction constant_test(double value = 1.0);

// psi identically 1, the symbol the strong consistency check reads
Symbol one_symbol();

struct EstimateOptions {
    MultiOrder alpha;
    std::vector<double> schedule;  // strictly increasing r values
    std::vector<double> levels;    // strictly increasing truncation levels
    int jobs = 1;
};

struct HDistEntry {
    int j = 0;
    int m = 0;
    std::string phi;
    std::string psi;
    std::vector<Ladder> per_level;  // one r-ladder per truncation level
    LevelCombined combined;
};

struct HDistEstimate {
    MultiOrder alpha;
    std::vector<double> schedule;
    std::vector<double> levels;
    std::vector<HDistEntry> entries;

    const HDistEntry* find(int j, int m, const std::string& phi,
                           const std::string& psi) const;
};

// Runs the full pairing table.  A psi with label "one" is appended when
// missing (the strong consistency check needs it).  Both families must agree
// on the grid per schedule point; members are recentred by the declared weak
// limits before pairing, and truncation levels above a known sup bound share
// one evaluation since T_l is the identity there.
HDistEstimate estimate_hdistribution(const SequenceFamily& u, const SequenceFamily& v,
                                     const std::vector<TestFunction>& phis,
                                     std::vector<Symbol> psis,
                                     const EstimateOptions& opts);

struct LocalizationOptions {
    CutoffSpec cutoff;
    double hyp_tol = 1e-8;           // residual norm accepted outright
    bool enforce_hypothesis = true;  // throw when the residual refuses to vanish
};

struct LocalizationResult {
    std::vector<double> schedule;
    std::vector<double> residual_norms;  // max over rows, inverted-weight L2 norm
    bool hypothesis_ok = true;
    // < G_s , B_psi(phi v_m) > summed over rows, against the same quantity
    // pushed through the adjoint derivative factors term by term; the two
    // agree up to rounding whenever the discrete calculus is wired right
    std::vector<cplx> telescoped;
    std::vector<cplx> decomposed;
    double max_rel_gap = 0.0;
};

LocalizationResult localization_residual(const ExperimentSetup& setup,
                                         const TestFunction& phi, const Symbol& psi,
                                         int v_component,
                                         const std::vector<double>& schedule,
                                         const LocalizationOptions& opts = {});

// real directions annihilating every complex symbol row at (x, xi)
struct WaveConeSample {
    std::vector<double> xi;
    int kernel_dim = 0;
    std::vector<std::vector<double>> basis;  // orthonormal, one vector per column
};

WaveConeSample wavecone_membership(const DifferentialConstraint& c,
                                   std::span<const double> x,
                                   std::span<const double> xi);

struct ConsistencyResult {
    std::string verdict;  // "consistent" | "null" | "inconsistent"
    double min_eigenvalue = 0.0;
    double max_abs_eigenvalue = 0.0;
    int kernel_dim_min = 0;
    int kernel_dim_max = 0;
    int samples = 0;
};

// samples the wave cone over random (x, xi) and inspects Q restricted to it
ConsistencyResult consistency_check(const DifferentialConstraint& c, const QuadraticForm& Q,
                                    int samples = 64, std::uint64_t seed = 5);

struct StrongRow {
    std::string phi;
    double value = 0.0;
    double error = 0.0;
    std::string verdict;  // ">= 0 within error" | "= 0 within error" | "negative beyond error"
};

struct StrongConsistencyResult {
    std::vector<StrongRow> rows;
    bool nonnegative = true;  // no phi lands negative beyond error
    bool all_zero = true;
};

// sum_jm q_jm mu[j,m](phi, one) per test function; needs a constant Q
StrongConsistencyResult strong_consistency_check(const HDistEstimate& est,
                                                 const QuadraticForm& Q,
                                                 double zero_tol = 1e-10);

}  // namespace hdistlab
