#include "hdistlab/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hdistlab {

namespace {

bool is_positive_integer(double a) {
    return a > 0.0 && a == std::floor(a);
}

}  // namespace

MultiOrder::MultiOrder(std::vector<double> o) : orders(std::move(o)) {
    if (orders.empty()) throw std::invalid_argument("MultiOrder: empty");
    const double d = static_cast<double>(orders.size());
    for (double a : orders) {
        if (!std::isfinite(a) || a <= 0.0)
            throw std::invalid_argument("MultiOrder: orders must be positive");
        if (!is_positive_integer(a) && a < d)
            throw std::invalid_argument(
                "MultiOrder: each order must be a positive integer or >= the dimension");
    }
}

bool MultiOrder::is_isotropic() const {
    for (double a : orders)
        if (a != orders[0]) return false;
    return true;
}

double rho(std::span<const double> xi, const MultiOrder& alpha) {
    if (static_cast<int>(xi.size()) != alpha.dim())
        throw std::invalid_argument("rho: dimension mismatch");
    double s = 0.0;
    for (int k = 0; k < alpha.dim(); ++k)
        s += std::pow(std::abs(xi[k]), 2.0 * alpha[k]);
    return std::sqrt(s);
}

std::vector<double> project_to_P(std::span<const double> xi, const MultiOrder& alpha) {
    if (static_cast<int>(xi.size()) != alpha.dim())
        throw std::invalid_argument("project_to_P: dimension mismatch");
    double s = 0.0;
    for (int k = 0; k < alpha.dim(); ++k)
        s += std::pow(std::abs(xi[k]), 2.0 * alpha[k]);
    if (s <= 0.0) throw std::invalid_argument("project_to_P: zero frequency");
    std::vector<double> eta(xi.size());
    for (int j = 0; j < alpha.dim(); ++j)
        eta[j] = xi[j] * std::pow(s, -1.0 / (2.0 * alpha[j]));
    return eta;
}

double hoermander_weight(std::span<const double> xi, int nu) {
    const int d = static_cast<int>(xi.size());
    if (nu < 0 || nu > d) throw std::invalid_argument("hoermander_weight: bad split");
    double b1 = 0.0, b2 = 0.0;
    for (int k = 0; k < d; ++k) {
        if (k < nu) b1 += xi[k] * xi[k];
        else        b2 += xi[k] * xi[k];
    }
    const double t1 = 4.0 * M_PI * M_PI * b1;          // (2 pi |xi_1|)^2
    const double t2 = 16.0 * std::pow(M_PI, 4) * b2 * b2;  // (2 pi |xi_2|)^4
    return std::sqrt(1.0 + t1 + t2);
}

namespace {

// exponential smoothstep, 0 at t<=0 and 1 at t>=1, C^inf in between
double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

}  // namespace

double cutoff_theta(std::span<const double> xi, double inner, double outer,
                    const MultiOrder& alpha) {
    if (!(0.0 < inner && inner < outer))
        throw std::invalid_argument("cutoff_theta: need 0 < inner < outer");
    const double r = rho(xi, alpha);
    return 1.0 - smoothstep((r - inner) / (outer - inner));
}

std::pair<Symbol, Symbol> even_odd_split(const Symbol& s) {
    auto base = s.eval;
    Symbol even, odd;
    even.eval = [base](std::span<const double> eta) {
        std::vector<double> neg(eta.begin(), eta.end());
        for (auto& v : neg) v = -v;
        return 0.5 * (base(eta) + base(neg));
    };
    odd.eval = [base](std::span<const double> eta) {
        std::vector<double> neg(eta.begin(), eta.end());
        for (auto& v : neg) v = -v;
        return 0.5 * (base(eta) - base(neg));
    };
    even.parity = Parity::Even;
    odd.parity = Parity::Odd;
    even.smooth_claim = odd.smooth_claim = s.smooth_claim;
    even.label = s.label + ":even";
    odd.label = s.label + ":odd";
    return {even, odd};
}

namespace {

// direction with every component bounded away from the coordinate hyperplanes
std::vector<double> hyperplane_free_direction(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> mag(0.1, 1.0);
    std::uniform_int_distribution<int> sign(0, 1);
    std::vector<double> u(d);
    for (int k = 0; k < d; ++k) u[k] = (sign(rng) ? 1.0 : -1.0) * mag(rng);
    return u;
}

}  // namespace

double parity_violation(const Symbol& s, const MultiOrder& alpha, int samples,
                        std::uint64_t seed) {
    if (s.parity == Parity::None) return 0.0;
    std::mt19937_64 rng(seed);
    const int d = alpha.dim();
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        auto u = hyperplane_free_direction(rng, d);
        auto eta = project_to_P(u, alpha);
        std::vector<double> neg(eta);
        for (auto& v : neg) v = -v;
        const cplx a = s.eval(eta);
        const cplx b = s.eval(neg);
        const cplx resid = s.parity == Parity::Even ? a - b : a + b;
        worst = std::max(worst, std::abs(resid));
    }
    return worst;
}

namespace {

struct CandidateSymbol {
    const Symbol* s;
    const MultiOrder* alpha;
    bool compose;
    cplx operator()(std::span<const double> xi) const {
        if (compose) return s->eval(project_to_P(xi, *alpha));
        return s->eval(xi);
    }
};

// nested central differences: apply D_k once per unit of the multi-index
cplx central_difference(const CandidateSymbol& f, std::vector<double>& xi,
                        std::span<const int> beta, double h, int axis) {
    while (axis < static_cast<int>(beta.size()) && beta[axis] == 0) ++axis;
    if (axis == static_cast<int>(beta.size())) return f(xi);
    std::vector<int> rest(beta.begin(), beta.end());
    rest[axis] -= 1;
    xi[axis] += h;
    const cplx up = central_difference(f, xi, rest, h, axis);
    xi[axis] -= 2.0 * h;
    const cplx dn = central_difference(f, xi, rest, h, axis);
    xi[axis] += h;
    return (up - dn) / (2.0 * h);
}

void enumerate_multi_indices(int d, int max_total, std::vector<int>& cur, int axis,
                             std::vector<std::vector<int>>& out) {
    if (axis == d) {
        out.push_back(cur);
        return;
    }
    int used = 0;
    for (int k = 0; k < axis; ++k) used += cur[k];
    for (int v = 0; v + used <= max_total; ++v) {
        cur[axis] = v;
        enumerate_multi_indices(d, max_total, cur, axis + 1, out);
    }
    cur[axis] = 0;
}

}  // namespace

MarcinkiewiczResult marcinkiewicz_estimate(const Symbol& s, const MultiOrder& alpha,
                                           int levels, int per_level,
                                           std::uint64_t seed, bool compose_projection) {
    const int d = alpha.dim();
    MarcinkiewiczResult res;
    res.level_max.assign(levels, 0.0);
    res.maximizer.assign(d, 0.0);

    std::vector<std::vector<int>> betas;
    std::vector<int> cur(d, 0);
    enumerate_multi_indices(d, d, cur, 0, betas);

    CandidateSymbol f{&s, &alpha, compose_projection};
    for (int lev = 0; lev < levels; ++lev) {
        // per-level generator, so enlarging per_level keeps earlier points
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (lev + 1));
        const double radius = std::pow(2.0, lev);
        for (int i = 0; i < per_level; ++i) {
            auto u = hyperplane_free_direction(rng, d);
            double nrm = 0.0;
            for (double v : u) nrm += v * v;
            nrm = std::sqrt(nrm);
            std::vector<double> xi(d);
            for (int k = 0; k < d; ++k) xi[k] = u[k] / nrm * radius;

            const double h = std::ldexp(radius, -20);  // 2^-20 |xi|
            double local = 0.0;
            bool failed = false;
            for (const auto& beta : betas) {
                cplx der;
                try {
                    std::vector<double> xi_work(xi);
                    der = central_difference(f, xi_work, beta, h, 0);
                } catch (...) {
                    failed = true;
                    break;
                }
                if (!std::isfinite(der.real()) || !std::isfinite(der.imag())) {
                    failed = true;
                    break;
                }
                double mono = 1.0;
                for (int k = 0; k < d; ++k) mono *= std::pow(xi[k], beta[k]);
                local = std::max(local, std::abs(mono) * std::abs(der));
            }
            ++res.total_samples;
            if (failed) {
                ++res.skipped;
                continue;
            }
            res.level_max[lev] = std::max(res.level_max[lev], local);
            if (local > res.estimate) {
                res.estimate = local;
                res.maximizer = xi;
            }
        }
    }

    res.unreliable = res.total_samples > 0 &&
                     res.skipped > res.total_samples / 10;
    // growth across levels that never settles marks a non-multiplier
    if (levels >= 3) {
        bool nondecreasing = true;
        for (int lev = 1; lev < levels; ++lev)
            if (res.level_max[lev] < res.level_max[lev - 1] * 0.99) nondecreasing = false;
        const double first = res.level_max.front(), last = res.level_max.back();
        res.unbounded_suspect = nondecreasing && first > 0.0 && last >= 4.0 * first;
    }
    return res;
}

Symbol projected_extension(const Symbol& s, const MultiOrder& alpha) {
    Symbol out;
    auto base = s.eval;
    MultiOrder a = alpha;
    out.eval = [base, a](std::span<const double> xi) {
        auto eta = project_to_P(xi, a);
        return base(eta);
    };
    out.parity = s.parity;  // the projection is odd, so parity survives composition
    out.smooth_claim = s.smooth_claim;
    out.label = s.label + "@P";
    return out;
}

double AnisotropicWeight::value(std::span<const double> xi) const {
    switch (kind) {
        case Kind::RhoAlpha:
            return rho(xi, alpha);
        case Kind::SobolevAlpha: {
            double s = 1.0;
            for (int k = 0; k < alpha.dim(); ++k)
                s += std::pow(2.0 * M_PI * std::abs(xi[k]), 2.0 * alpha[k]);
            return std::sqrt(s);
        }
        case Kind::HoermanderSplit:
            return hoermander_weight(xi, nu);
        case Kind::ParabolicRho: {
            double s = xi[0] * xi[0];
            for (std::size_t j = 1; j < xi.size(); ++j)
                s += std::pow(xi[j], 4);
            return std::sqrt(s);
        }
    }
    return 1.0;
}

}  // namespace hdistlab
