#pragma once

// Fourier multiplier operators on the lattice.
//
// A MultiplierOp is a per-frequency table applied as forward transform,
// pointwise multiply, inverse transform.  Operators built from a Symbol
// evaluate psi(project_to_P(xi)) away from xi = 0; the zero mode gets
// zero_mode_value (default 0).  Self-conjugate lattice rows (any component
// at -N_k/2) also carry 0 so that lattice parity survives: even real symbols
// map real fields to real fields, odd real symbols to purely imaginary ones,
// including on full-band inputs.

#include <functional>
#include <string>

#include "hdistlab/spectral_core.hpp"
#include "hdistlab/symbols.hpp"

namespace hdistlab {

struct MultiplierOp {
    Grid grid;
    std::vector<cplx> symbol;  // per flat frequency index, FFT storage order
    std::string label;

    Field apply(const Field& f) const;
    Spectrum apply_spectral(const Spectrum& in) const;  // multiply only, no transforms
};

// build an op from an arbitrary lattice-symbol callable s(xi)
MultiplierOp make_multiplier(const Grid& grid,
                             const std::function<cplx(std::span<const double>)>& s,
                             const std::string& label = "");

Field apply_multiplier(const MultiplierOp& op, const Field& f);

// op with symbol psi(project_to_P(xi, alpha)); zero mode and Nyquist rows -> zero_mode_value/0
MultiplierOp projected_symbol_op(const Grid& grid, const Symbol& psi, const MultiOrder& alpha,
                                 cplx zero_mode_value = cplx(0.0));
Field apply_projected_symbol(const Grid& grid, const Symbol& psi, const MultiOrder& alpha,
                             const Field& f, cplx zero_mode_value = cplx(0.0));

struct CutoffSpec {
    double inner = 1.0;
    double outer = 4.0;
};

// B_psi: symbol psi(project_to_P(xi)) (1 - theta(xi)) / rho(xi); vanishes
// where theta = 1 (a neighbourhood of 0), bounded on the lattice
MultiplierOp smoothing_op(const Grid& grid, const Symbol& psi, const MultiOrder& alpha,
                          const CutoffSpec& cutoff = {});

// derivative composed with the smoothing operator:
// psi(project_to_P(xi)) (1 - theta(xi)) prod_k (2 pi i xi_k)^(beta_k) / rho(xi)
// (conjugate_derivative flips the derivative factor to its adjoint)
MultiplierOp smoothing_derivative_op(const Grid& grid, const Symbol& psi,
                                     const MultiOrder& alpha,
                                     std::span<const double> axis_orders,
                                     const CutoffSpec& cutoff = {},
                                     bool conjugate_derivative = false);

// principal branch of (2 pi i t)^a: |2 pi t|^a e^{i a (pi/2) sign t}, 0 at t = 0
cplx power_2pi_i(double t, double a);

// fractional derivative along one axis; integer a matches repeated spectral
// differentiation (both zero the Nyquist row)
Field fractional_derivative(const Field& f, int axis, double a);
MultiplierOp fractional_derivative_op(const Grid& grid, int axis, double a);

// mixed spectral derivative prod_k (2 pi i xi_k)^(beta_k)
MultiplierOp derivative_op(const Grid& grid, std::span<const double> axis_orders,
                           bool conjugate = false);

// || inverse( w(xi)^(+/-1) fhat ) ||_p ; invert = true gives the negative-order norm
double anisotropic_norm(const Field& f, double p, const AnisotropicWeight& w,
                        bool invert = false);

// T_l: keep samples with |v| < l, zero the rest
Field truncate(const Field& f, double l);

}  // namespace hdistlab
