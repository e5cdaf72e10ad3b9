#pragma once

// First/second-order differential constraint systems
//   G_s = sum_j sum_k d^(beta)( a_sjk u_j ),   s = 1..M,
// and the quadratic interaction form q(x; u, v) = sum_jm q_jm u_j v_m.
//
// Two constraint flavours share one term list:
//   - Classical: first-order terms on axes k <= nu, second-order on k,l > nu;
//     the wave-cone symbol row is  i sum a_sjk xi_k - sum b_sjkl xi_k xi_l.
//   - Fractional: one per-axis order alpha_k per term; the localized symbol
//     is sum a_sjk (2 pi i xi_k)^(alpha_k).
// Either way the field residual G_s uses true spectral derivatives.

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "hdistlab/spectral_core.hpp"
#include "hdistlab/symbols.hpp"

namespace hdistlab {

// constant or smooth spatially-varying coefficient
using Coefficient = std::variant<double, Field>;

// coeff * u pointwise (grids must match for field coefficients)
Field apply_coefficient(const Coefficient& coeff, const Field& u);

struct ConstraintTerm {
    int row = 0;        // s
    int component = 0;  // j
    std::vector<double> axis_orders;  // beta; derivative prod_k (2 pi i xi_k)^(beta_k)
    Coefficient coeff = 1.0;
};

struct DifferentialConstraint {
    enum class Mode { Classical, Fractional };

    Mode mode = Mode::Fractional;
    int rows = 0;        // M
    int components = 0;  // N
    int dim = 0;         // d
    int nu = 0;          // classical split (first-order axes count)
    MultiOrder orders;   // per-axis orders used for rho/weights in localization
    std::vector<ConstraintTerm> terms;

    // fractional system from a_sjk (flattened [s][j][k]) with per-axis orders
    static DifferentialConstraint fractional(int rows, int components,
                                             const MultiOrder& alpha,
                                             const std::vector<Coefficient>& a_sjk);
    // classical system: a_sjk over k < nu, optional b_sjkl over k,l >= nu
    static DifferentialConstraint classical(int rows, int components, int dim, int nu,
                                            const std::vector<Coefficient>& a_sjk,
                                            const std::vector<Coefficient>& b_sjkl = {});

    // residual fields G_s for members u (size = components), true derivatives
    std::vector<Field> residual(const std::vector<Field>& u) const;

    // complex symbol matrix M(x, xi), rows x components; classical mode uses
    // the i a xi - b xi xi convention, fractional uses (2 pi i xi_k)^(alpha_k)
    std::vector<std::vector<cplx>> symbol_matrix(std::span<const double> x,
                                                 std::span<const double> xi) const;
};

struct QuadraticForm {
    int n = 0;
    std::vector<Coefficient> q;  // symmetric, flattened [j][m]

    static QuadraticForm identity(int n);
    static QuadraticForm constant(int n, std::vector<double> entries);

    bool is_constant() const;
    double constant_at(int j, int m) const;  // requires is_constant()
    // q(x; u, v) = sum_jm q_jm(x) u_j(x) v_m(x), bilinear (no conjugation)
    Field evaluate(const std::vector<Field>& u, const std::vector<Field>& v) const;
    // real symmetric matrix at a point x
    std::vector<double> matrix_at(std::span<const double> x, const Grid* grid) const;
};

}  // namespace hdistlab
