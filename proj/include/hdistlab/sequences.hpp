#pragma once

// Generators for the weakly-converging sequence families the experiments
// drive: modulated oscillations, L^p-normalized concentrations, the plateau
// counterexample, the div-curl pair, and the parabolic constrained pair.
// A family hands out members per schedule parameter r together with its
// declared weak limit, exponent, uniform bound, and support data.

#include <functional>
#include <optional>
#include <string>

#include "hdistlab/constraints.hpp"
#include "hdistlab/spectral_core.hpp"

namespace hdistlab {

struct SequenceFamily {
    std::string label;
    int components = 1;
    double p = 2.0;              // declared L^p exponent
    double uniform_bound = 0.0;  // lp_norm(member_j, p) <= uniform_bound for every r, j
    double max_abs = std::numeric_limits<double>::infinity();  // sup_r,x |member|, if finite

    // per axis [lo, hi]; empty means the full torus
    std::vector<std::pair<double, double>> support_box;

    std::function<Grid(double r)> grid_for;
    std::function<std::vector<Field>(double r)> generate;
    // declared weak limit sampled on a given grid (one field per component)
    std::function<std::vector<Field>(const Grid&)> weak_limit;
    // dominating envelope V with |member_r| <= V pointwise, when declared
    std::function<Field(const Grid&)> dominating;

    bool has_dominating() const { return static_cast<bool>(dominating); }
};

// smooth compactly supported bump: amplitude * exp(1 - 1/(1 - s^2)) with
// s = torus-distance(x, center)/radius, zero outside
Field bump_field(const Grid& grid, std::span<const double> center, double radius,
                 double amplitude = 1.0);
double bump_value(std::span<const double> x, std::span<const double> center,
                  double radius, double amplitude = 1.0);

// gaussian test bump amplitude * exp(-|x-center|^2 / (2 sigma^2)) (torus metric)
Field gaussian_field(const Grid& grid, std::span<const double> center, double sigma,
                     double amplitude = 1.0);

struct ProfileSpec {
    // constant amplitude when radius <= 0, else a bump
    std::vector<double> center;
    double radius = 0.0;
    double amplitude = 1.0;

    Field materialize(const Grid& grid) const;
};

enum class OscillationPhase { Cosine, Exponential };

// member_r(x) = profile(x) * g(2 pi r k.x); rejects r k outside the band
SequenceFamily oscillation_family(const Grid& grid, const ProfileSpec& profile,
                                  std::vector<int> direction, OscillationPhase phase,
                                  double p);

// member_r(x) = r^(d/p) U(r (x - x0)); profile U is a bump of given radius
SequenceFamily concentration_family(const Grid& grid, const ProfileSpec& profile,
                                    std::vector<double> x0, double p);

// plateau family u_r = r on |x - x0| < r^-2 (d = 1).  Picks N = 8 r^2 grids
// (power of two) unless a fixed grid is supplied, and snaps the plateau
// center to the nearest half-grid point so the discrete mass integral of
// u_r^2 is exactly 2.  No admissible dominating envelope exists.
SequenceFamily counterexample_family(double x0, double r_min = 8.0,
                                     std::optional<Grid> fixed_grid = std::nullopt);

struct ExperimentSetup {
    SequenceFamily u;
    SequenceFamily v;
    QuadraticForm Q;
    std::optional<DifferentialConstraint> constraint;
};

// d = 2: combined 4-component family W = (u, v) with u = cos(2 pi r k1.x) t1
// (t1 orthogonal to k1, div u = 0) and v = cos(2 pi r k2.x) k2/|k2|
// (curl v = 0); requires k1.k2 = 0.  Q gives q(W, W) = u.v.
ExperimentSetup divcurl_pair(const Grid& grid, std::vector<int> k1, std::vector<int> k2);

struct ParabolicForcing {
    double gamma = 1.0;      // decay rate of the residual, r^-gamma
    double amplitude = 0.0;  // 0 disables
    std::vector<double> center;
    double radius = 0.25;
};

struct ParabolicSpec {
    // diffusion coefficient: constant, or a smooth positive field of x only
    Coefficient a = 1.0;
    std::vector<int> seed_mode;  // (k0, kx...), k0 != 0
    double amplitude = 1.0;
    double r_max = 32.0;         // sizes the (t,x) grid
    ParabolicForcing forcing;    // optional slow forcing f_r - f
};

// combined 2-component family (u1, u2) on the (t,x) torus with
// d_t u1 - sum_kl d_xk d_xl (a_kl u2) = forcing residual.  The seed
// oscillation rides mode (r^2 k0, r kx) so u1 stays bounded in L^p and the
// projected direction is r-independent; u1 modes on the xi_0 = 0 slice are
// dropped (energy recorded via dropped_energy).
ExperimentSetup parabolic_pair(const ParabolicSpec& spec);
double parabolic_dropped_energy(const ParabolicSpec& spec, double r);

// members and weak limit shifted by a constant (recentring invariance checks)
SequenceFamily shift_family(const SequenceFamily& fam, cplx offset);

}  // namespace hdistlab
