#include "hdistlab/multipliers.hpp"

#include <cmath>
#include <stdexcept>

namespace hdistlab {

Field MultiplierOp::apply(const Field& f) const {
    if (!(f.grid == grid)) throw std::invalid_argument("multiplier: grid mismatch");
    Spectrum c = forward_transform(f);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= symbol[i];
    return inverse_transform(grid, c);
}

Spectrum MultiplierOp::apply_spectral(const Spectrum& in) const {
    if (in.size() != symbol.size()) throw std::invalid_argument("multiplier: size mismatch");
    Spectrum out(in);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= symbol[i];
    return out;
}

MultiplierOp make_multiplier(const Grid& grid,
                             const std::function<cplx(std::span<const double>)>& s,
                             const std::string& label) {
    MultiplierOp op;
    op.grid = grid;
    op.label = label;
    op.symbol.resize(grid.total());
    std::vector<double> xi(grid.dim());
    for (std::int64_t i = 0; i < grid.total(); ++i) {
        grid.freq_at(i, xi);
        op.symbol[i] = s(xi);
    }
    return op;
}

Field apply_multiplier(const MultiplierOp& op, const Field& f) { return op.apply(f); }

namespace {

bool zero_freq(std::span<const double> xi) {
    for (double v : xi)
        if (v != 0.0) return false;
    return true;
}

}  // namespace

MultiplierOp projected_symbol_op(const Grid& grid, const Symbol& psi, const MultiOrder& alpha,
                                 cplx zero_mode_value) {
    if (alpha.dim() != grid.dim())
        throw std::invalid_argument("projected_symbol_op: order/grid dimension mismatch");
    MultiplierOp op;
    op.grid = grid;
    op.label = psi.label;
    op.symbol.resize(grid.total());
    std::vector<double> xi(grid.dim());
    for (std::int64_t i = 0; i < grid.total(); ++i) {
        grid.freq_at(i, xi);
        if (zero_freq(xi)) {
            op.symbol[i] = zero_mode_value;
        } else if (grid.any_nyquist(i)) {
            op.symbol[i] = 0.0;
        } else {
            op.symbol[i] = psi.eval(project_to_P(xi, alpha));
        }
    }
    return op;
}

Field apply_projected_symbol(const Grid& grid, const Symbol& psi, const MultiOrder& alpha,
                             const Field& f, cplx zero_mode_value) {
    return projected_symbol_op(grid, psi, alpha, zero_mode_value).apply(f);
}

MultiplierOp smoothing_op(const Grid& grid, const Symbol& psi, const MultiOrder& alpha,
                          const CutoffSpec& cutoff) {
    return smoothing_derivative_op(grid, psi, alpha, {}, cutoff);
}

MultiplierOp smoothing_derivative_op(const Grid& grid, const Symbol& psi,
                                     const MultiOrder& alpha,
                                     std::span<const double> axis_orders,
                                     const CutoffSpec& cutoff,
                                     bool conjugate_derivative) {
    if (alpha.dim() != grid.dim())
        throw std::invalid_argument("smoothing op: order/grid dimension mismatch");
    if (!axis_orders.empty() && static_cast<int>(axis_orders.size()) != grid.dim())
        throw std::invalid_argument("smoothing op: derivative orders dimension mismatch");
    MultiplierOp op;
    op.grid = grid;
    op.label = "B[" + psi.label + "]";
    op.symbol.resize(grid.total());
    std::vector<double> xi(grid.dim());
    for (std::int64_t i = 0; i < grid.total(); ++i) {
        grid.freq_at(i, xi);
        if (zero_freq(xi) || grid.any_nyquist(i)) {
            op.symbol[i] = 0.0;
            continue;
        }
        const double theta = cutoff_theta(xi, cutoff.inner, cutoff.outer, alpha);
        if (theta >= 1.0) {
            op.symbol[i] = 0.0;
            continue;
        }
        cplx v = psi.eval(project_to_P(xi, alpha)) * (1.0 - theta) / rho(xi, alpha);
        for (std::size_t k = 0; k < axis_orders.size(); ++k) {
            if (axis_orders[k] == 0.0) continue;
            cplx d = power_2pi_i(xi[k], axis_orders[k]);
            v *= conjugate_derivative ? std::conj(d) : d;
        }
        op.symbol[i] = v;
    }
    return op;
}

cplx power_2pi_i(double t, double a) {
    if (t == 0.0) return a == 0.0 ? cplx(1.0) : cplx(0.0);
    const double mag = std::pow(2.0 * M_PI * std::abs(t), a);
    const double phase = a * (M_PI / 2.0) * (t > 0.0 ? 1.0 : -1.0);
    return cplx(mag * std::cos(phase), mag * std::sin(phase));
}

MultiplierOp fractional_derivative_op(const Grid& grid, int axis, double a) {
    if (axis < 0 || axis >= grid.dim())
        throw std::invalid_argument("fractional_derivative: bad axis");
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("fractional_derivative: order must be positive");
    MultiplierOp op;
    op.grid = grid;
    op.label = "d^" + std::to_string(a) + "/dx" + std::to_string(axis);
    op.symbol.resize(grid.total());
    std::vector<double> xi(grid.dim());
    for (std::int64_t i = 0; i < grid.total(); ++i) {
        grid.freq_at(i, xi);
        op.symbol[i] = grid.any_nyquist(i) ? cplx(0.0) : power_2pi_i(xi[axis], a);
    }
    return op;
}

Field fractional_derivative(const Field& f, int axis, double a) {
    return fractional_derivative_op(f.grid, axis, a).apply(f);
}

MultiplierOp derivative_op(const Grid& grid, std::span<const double> axis_orders,
                           bool conjugate) {
    if (static_cast<int>(axis_orders.size()) != grid.dim())
        throw std::invalid_argument("derivative_op: orders dimension mismatch");
    MultiplierOp op;
    op.grid = grid;
    op.label = "derivative";
    op.symbol.resize(grid.total());
    std::vector<double> xi(grid.dim());
    for (std::int64_t i = 0; i < grid.total(); ++i) {
        grid.freq_at(i, xi);
        if (grid.any_nyquist(i)) {
            op.symbol[i] = 0.0;
            continue;
        }
        cplx v(1.0);
        for (std::size_t k = 0; k < axis_orders.size(); ++k) {
            if (axis_orders[k] == 0.0) continue;
            v *= power_2pi_i(xi[k], axis_orders[k]);
        }
        op.symbol[i] = conjugate ? std::conj(v) : v;
    }
    return op;
}

double anisotropic_norm(const Field& f, double p, const AnisotropicWeight& w,
                        bool invert) {
    if (!(p > 1.0))
        throw std::invalid_argument("anisotropic_norm requires p > 1");
    Spectrum c = forward_transform(f);
    std::vector<double> xi(f.grid.dim());
    for (std::int64_t i = 0; i < f.grid.total(); ++i) {
        f.grid.freq_at(i, xi);
        const double wv = w.value(xi);
        if (invert) {
            if (wv <= 0.0)
                throw std::invalid_argument("anisotropic_norm: weight not invertible at 0");
            c[i] /= wv;
        } else {
            c[i] *= wv;
        }
    }
    return lp_norm(inverse_transform(f.grid, c), p);
}

Field truncate(const Field& f, double l) {
    if (!(l > 0.0)) throw std::invalid_argument("truncate: level must be positive");
    Field out(f.grid);
    for (std::int64_t i = 0; i < f.size(); ++i)
        out.values[i] = std::abs(f.values[i]) < l ? f.values[i] : cplx(0.0);
    return out;
}

}  // namespace hdistlab
