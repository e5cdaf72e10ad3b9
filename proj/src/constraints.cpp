#include "hdistlab/constraints.hpp"

#include <cmath>
#include <stdexcept>

#include "hdistlab/multipliers.hpp"

namespace hdistlab {

namespace {

// nearest grid sample of a coefficient field, torus-wrapped
std::int64_t nearest_flat_index(const Grid& grid, std::span<const double> x) {
    if (static_cast<int>(x.size()) != grid.dim())
        throw std::invalid_argument("coefficient lookup: point dimension mismatch");
    std::vector<int> multi(grid.dim());
    for (int a = 0; a < grid.dim(); ++a) {
        const int n = grid.size(a);
        long j = std::lround(x[a] * n) % n;
        if (j < 0) j += n;
        multi[a] = static_cast<int>(j);
    }
    return grid.flat_index(multi);
}

cplx coefficient_at(const Coefficient& c, std::span<const double> x) {
    if (std::holds_alternative<double>(c)) return cplx(std::get<double>(c));
    const Field& f = std::get<Field>(c);
    return f.values[nearest_flat_index(f.grid, x)];
}

bool coefficient_is_zero(const Coefficient& c) {
    return std::holds_alternative<double>(c) && std::get<double>(c) == 0.0;
}

int term_total_order(const ConstraintTerm& t) {
    double s = 0.0;
    for (double b : t.axis_orders) s += b;
    const int n = static_cast<int>(std::lround(s));
    if (std::abs(s - n) > 1e-12)
        throw std::logic_error("classical constraint term has non-integer order");
    return n;
}

}  // namespace

Field apply_coefficient(const Coefficient& c, const Field& u) {
    if (std::holds_alternative<double>(c)) {
        Field out = u;
        const double s = std::get<double>(c);
        for (auto& v : out.values) v *= s;
        return out;
    }
    const Field& w = std::get<Field>(c);
    if (!(w.grid == u.grid))
        throw std::invalid_argument("coefficient field lives on a different grid");
    return multiply(w, u);
}

DifferentialConstraint DifferentialConstraint::fractional(
    int rows, int components, const MultiOrder& alpha,
    const std::vector<Coefficient>& a_sjk) {
    const int d = alpha.dim();
    if (rows < 1 || components < 1)
        throw std::invalid_argument("constraint needs rows >= 1 and components >= 1");
    if (a_sjk.size() != static_cast<std::size_t>(rows) * components * d)
        throw std::invalid_argument("fractional constraint: a_sjk size != rows*components*dim");

    DifferentialConstraint c;
    c.mode = Mode::Fractional;
    c.rows = rows;
    c.components = components;
    c.dim = d;
    c.nu = 0;
    c.orders = alpha;
    for (int s = 0; s < rows; ++s)
        for (int j = 0; j < components; ++j)
            for (int k = 0; k < d; ++k) {
                const Coefficient& a = a_sjk[(static_cast<std::size_t>(s) * components + j) * d + k];
                if (coefficient_is_zero(a)) continue;
                ConstraintTerm t;
                t.row = s;
                t.component = j;
                t.axis_orders.assign(d, 0.0);
                t.axis_orders[k] = alpha[k];
                t.coeff = a;
                c.terms.push_back(std::move(t));
            }
    return c;
}

DifferentialConstraint DifferentialConstraint::classical(
    int rows, int components, int dim, int nu,
    const std::vector<Coefficient>& a_sjk, const std::vector<Coefficient>& b_sjkl) {
    if (rows < 1 || components < 1 || dim < 1)
        throw std::invalid_argument("constraint needs rows, components, dim >= 1");
    if (nu < 0 || nu > dim)
        throw std::invalid_argument("classical constraint: nu outside [0, dim]");
    const int d2 = dim - nu;
    if (a_sjk.size() != static_cast<std::size_t>(rows) * components * nu)
        throw std::invalid_argument("classical constraint: a_sjk size != rows*components*nu");
    if (!b_sjkl.empty() &&
        b_sjkl.size() != static_cast<std::size_t>(rows) * components * d2 * d2)
        throw std::invalid_argument(
            "classical constraint: b_sjkl size != rows*components*(dim-nu)^2");

    DifferentialConstraint c;
    c.mode = Mode::Classical;
    c.rows = rows;
    c.components = components;
    c.dim = dim;
    c.nu = nu;
    std::vector<double> ord(dim, 1.0);
    for (int k = nu; k < dim; ++k) ord[k] = 2.0;
    c.orders = MultiOrder(ord);
    for (int s = 0; s < rows; ++s)
        for (int j = 0; j < components; ++j) {
            for (int k = 0; k < nu; ++k) {
                const Coefficient& a = a_sjk[(static_cast<std::size_t>(s) * components + j) * nu + k];
                if (coefficient_is_zero(a)) continue;
                ConstraintTerm t;
                t.row = s;
                t.component = j;
                t.axis_orders.assign(dim, 0.0);
                t.axis_orders[k] = 1.0;
                t.coeff = a;
                c.terms.push_back(std::move(t));
            }
            if (b_sjkl.empty()) continue;
            for (int k = 0; k < d2; ++k)
                for (int l = 0; l < d2; ++l) {
                    const Coefficient& b =
                        b_sjkl[((static_cast<std::size_t>(s) * components + j) * d2 + k) * d2 + l];
                    if (coefficient_is_zero(b)) continue;
                    ConstraintTerm t;
                    t.row = s;
                    t.component = j;
                    t.axis_orders.assign(dim, 0.0);
                    t.axis_orders[nu + k] += 1.0;
                    t.axis_orders[nu + l] += 1.0;
                    t.coeff = b;
                    c.terms.push_back(std::move(t));
                }
        }
    return c;
}

std::vector<Field> DifferentialConstraint::residual(const std::vector<Field>& u) const {
    if (static_cast<int>(u.size()) != components)
        throw std::invalid_argument("constraint residual: wrong number of components");
    for (const Field& f : u)
        if (!(f.grid == u[0].grid))
            throw std::invalid_argument("constraint residual: members on mixed grids");
    const Grid& grid = u[0].grid;
    if (grid.dim() != dim)
        throw std::invalid_argument("constraint residual: grid dimension mismatch");

    std::vector<Field> out;
    out.reserve(rows);
    for (int s = 0; s < rows; ++s) out.emplace_back(grid);
    for (const ConstraintTerm& t : terms) {
        Field g = apply_coefficient(t.coeff, u[t.component]);
        g = apply_multiplier(derivative_op(grid, t.axis_orders), g);
        add_scaled(out[t.row], g, cplx(1.0));
    }
    return out;
}

std::vector<std::vector<cplx>> DifferentialConstraint::symbol_matrix(
    std::span<const double> x, std::span<const double> xi) const {
    if (static_cast<int>(xi.size()) != dim)
        throw std::invalid_argument("symbol_matrix: frequency dimension mismatch");
    std::vector<std::vector<cplx>> m(rows, std::vector<cplx>(components, cplx(0.0)));
    for (const ConstraintTerm& t : terms) {
        const cplx a = coefficient_at(t.coeff, x);
        cplx factor;
        if (mode == Mode::Fractional) {
            factor = a;
            for (int k = 0; k < dim; ++k)
                if (t.axis_orders[k] != 0.0) factor *= power_2pi_i(xi[k], t.axis_orders[k]);
        } else {
            const int order = term_total_order(t);
            if (order == 1) {
                int axis = 0;
                while (t.axis_orders[axis] == 0.0) ++axis;
                factor = a * cplx(0.0, 1.0) * xi[axis];
            } else if (order == 2) {
                double prod = 1.0;
                for (int k = 0; k < dim; ++k)
                    if (t.axis_orders[k] != 0.0) prod *= std::pow(xi[k], t.axis_orders[k]);
                factor = -a * prod;
            } else {
                throw std::logic_error("classical symbol supports orders 1 and 2 only");
            }
        }
        m[t.row][t.component] += factor;
    }
    return m;
}

QuadraticForm QuadraticForm::identity(int n) {
    if (n < 1) throw std::invalid_argument("quadratic form needs n >= 1");
    QuadraticForm q;
    q.n = n;
    q.q.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) q.q[static_cast<std::size_t>(j) * n + j] = 1.0;
    return q;
}

QuadraticForm QuadraticForm::constant(int n, std::vector<double> entries) {
    if (n < 1) throw std::invalid_argument("quadratic form needs n >= 1");
    if (entries.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("quadratic form: entries size != n*n");
    for (int j = 0; j < n; ++j)
        for (int mdx = j + 1; mdx < n; ++mdx)
            if (std::abs(entries[static_cast<std::size_t>(j) * n + mdx] -
                         entries[static_cast<std::size_t>(mdx) * n + j]) > 1e-12)
                throw std::invalid_argument("quadratic form must be symmetric");
    QuadraticForm q;
    q.n = n;
    q.q.assign(entries.begin(), entries.end());
    return q;
}

bool QuadraticForm::is_constant() const {
    for (const Coefficient& c : q)
        if (!std::holds_alternative<double>(c)) return false;
    return true;
}

double QuadraticForm::constant_at(int j, int m) const {
    const Coefficient& c = q[static_cast<std::size_t>(j) * n + m];
    if (!std::holds_alternative<double>(c))
        throw std::logic_error("quadratic form entry is not constant");
    return std::get<double>(c);
}

Field QuadraticForm::evaluate(const std::vector<Field>& u, const std::vector<Field>& v) const {
    if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n)
        throw std::invalid_argument("quadratic form: component count mismatch");
    for (const Field& f : u)
        if (!(f.grid == u[0].grid))
            throw std::invalid_argument("quadratic form: members on mixed grids");
    for (const Field& f : v)
        if (!(f.grid == u[0].grid))
            throw std::invalid_argument("quadratic form: members on mixed grids");
    Field out(u[0].grid);
    for (int j = 0; j < n; ++j)
        for (int m = 0; m < n; ++m) {
            const Coefficient& c = q[static_cast<std::size_t>(j) * n + m];
            if (coefficient_is_zero(c)) continue;
            Field term = multiply(u[j], v[m]);
            if (std::holds_alternative<double>(c)) {
                add_scaled(out, term, cplx(std::get<double>(c)));
            } else {
                const Field& w = std::get<Field>(c);
                if (!(w.grid == out.grid))
                    throw std::invalid_argument("quadratic form coefficient grid mismatch");
                term = multiply(w, term);
                add_scaled(out, term, cplx(1.0));
            }
        }
    return out;
}

std::vector<double> QuadraticForm::matrix_at(std::span<const double> x, const Grid*) const {
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            m[static_cast<std::size_t>(j) * n + k] =
                coefficient_at(q[static_cast<std::size_t>(j) * n + k], x).real();
    return m;
}

}  // namespace hdistlab
