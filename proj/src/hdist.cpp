#include "hdistlab/hdist.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace hdistlab {

namespace {

double wrap_half(double t) { return t - std::round(t); }

Field subtract(const Field& a, const Field& b) {
    Field out = a;
    add_scaled(out, b, cplx(-1.0));
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void require_increasing(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw std::invalid_argument(std::string(what) + " must be nonempty");
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (!(v[i] < v[i + 1]))
            throw std::invalid_argument(std::string(what) + " must be strictly increasing");
}

}  // namespace

Symbol one_symbol() {
    Symbol s;
    s.eval = [](std::span<const double>) { return cplx(1.0); };
    s.parity = Parity::Even;
    s.smooth_claim = true;
    s.label = "one";
    return s;
}

Field TestFunction::materialize(const Grid& grid) const {
    return sample(grid, eval);
}

TestFunction gaussian_test(std::vector<double> center, double sigma, double amplitude) {
    if (sigma <= 0.0) throw std::invalid_argument("gaussian test needs sigma > 0");
    std::string label = "gaussian:";
    for (std::size_t a = 0; a < center.size(); ++a)
        label += (a ? "," : "") + format_double(center[a]);
    label += ":" + format_double(sigma);
    TestFunction t;
    t.label = label;
    t.eval = [center, sigma, amplitude](std::span<const double> x) {
        if (x.size() != center.size())
            throw std::invalid_argument("test function: dimension mismatch");
        double s2 = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) {
            const double d = wrap_half(x[a] - center[a]);
            s2 += d * d;
        }
        return cplx(amplitude * std::exp(-s2 / (2.0 * sigma * sigma)));
    };
    return t;
}

TestFunction constant_test(double value) {
    TestFunction t;
    t.label = "const:" + format_double(value);
    t.eval = [value](std::span<const double>) { return cplx(value); };
    return t;
}

const HDistEntry* HDistEstimate::find(int j, int m, const std::string& phi,
                                      const std::string& psi) const {
    for (const HDistEntry& e : entries)
        if (e.j == j && e.m == m && e.phi == phi && e.psi == psi) return &e;
    return nullptr;
}

HDistEstimate estimate_hdistribution(const SequenceFamily& u, const SequenceFamily& v,
                                     const std::vector<TestFunction>& phis,
                                     std::vector<Symbol> psis,
                                     const EstimateOptions& opts) {
    require_increasing(opts.schedule, "schedule");
    require_increasing(opts.levels, "levels");
    if (phis.empty()) throw std::invalid_argument("estimate needs at least one test function");
    if (opts.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    {
        std::set<std::string> seen;
        for (const Symbol& s : psis) {
            if (s.label.empty()) throw std::invalid_argument("symbols must carry labels");
            if (!seen.insert(s.label).second)
                throw std::invalid_argument("duplicate symbol label: " + s.label);
        }
        for (const TestFunction& p : phis)
            if (p.label.empty()) throw std::invalid_argument("test functions must carry labels");
    }
    if (std::none_of(psis.begin(), psis.end(),
                     [](const Symbol& s) { return s.label == "one"; }))
        psis.push_back(one_symbol());

    const int nR = static_cast<int>(opts.schedule.size());
    const int J = u.components;
    const int M = v.components;
    const int P = static_cast<int>(phis.size());
    const int S = static_cast<int>(psis.size());
    const int L = static_cast<int>(opts.levels.size());
    const int keys = J * M * P * S;

    // plans are created serially so the workers only ever execute them
    {
        std::set<std::vector<int>> seen;
        for (double r : opts.schedule) {
            const Grid g = u.grid_for(r);
            if (!(g == v.grid_for(r)))
                throw std::invalid_argument("families disagree on the grid at r = " +
                                            format_double(r));
            if (static_cast<int>(g.dim()) != opts.alpha.dim())
                throw std::invalid_argument("alpha dimension does not match the grid");
            if (!seen.insert(g.sizes()).second) continue;
            Field dummy(g);
            inverse_transform(g, forward_transform(dummy));
        }
    }

    std::vector<std::vector<std::vector<cplx>>> values(
        nR, std::vector<std::vector<cplx>>(keys, std::vector<cplx>(L)));

    auto worker = [&](int rIdx) {
        const double r = opts.schedule[rIdx];
        const Grid grid = u.grid_for(r);

        std::vector<Field> u_mem = u.generate(r);
        std::vector<Field> v_mem = v.generate(r);
        if (static_cast<int>(u_mem.size()) != J || static_cast<int>(v_mem.size()) != M)
            throw std::logic_error("family returned an unexpected component count");
        std::vector<Field> u_lim = u.weak_limit(grid);
        std::vector<Field> v_lim = v.weak_limit(grid);
        if (static_cast<int>(u_lim.size()) != J || static_cast<int>(v_lim.size()) != M)
            throw std::logic_error("weak limit returned an unexpected component count");

        std::vector<Field> phi_fields;
        phi_fields.reserve(P);
        for (const TestFunction& p : phis) phi_fields.push_back(p.materialize(grid));

        // phi (u_r - u)_j, reused across every (m, psi, l)
        std::vector<Field> fu;
        fu.reserve(static_cast<std::size_t>(J) * P);
        for (int j = 0; j < J; ++j) {
            const Field uc = subtract(u_mem[j], u_lim[j]);
            for (int p = 0; p < P; ++p) fu.push_back(multiply(phi_fields[p], uc));
        }

        std::vector<MultiplierOp> ops;
        ops.reserve(S);
        for (const Symbol& s : psis) ops.push_back(projected_symbol_op(grid, s, opts.alpha));

        const double inf = std::numeric_limits<double>::infinity();
        for (int m = 0; m < M; ++m) {
            const Field vc = subtract(v_mem[m], v_lim[m]);
            const double thr = std::isfinite(v.max_abs)
                                   ? v.max_abs + lp_norm(v_lim[m], inf)
                                   : inf;
            // levels above thr see the whole field, so they share one pass
            int first_identity = L;
            while (first_identity > 0 && opts.levels[first_identity - 1] > thr)
                --first_identity;

            auto run_block = [&](const Field& t, int l_begin, int l_end) {
                for (int s = 0; s < S; ++s) {
                    const Field g = ops[s].apply(t);
                    for (int j = 0; j < J; ++j)
                        for (int p = 0; p < P; ++p) {
                            const cplx val = pair(fu[static_cast<std::size_t>(j) * P + p], g);
                            const int key = ((j * M + m) * P + p) * S + s;
                            for (int l = l_begin; l < l_end; ++l)
                                values[rIdx][key][l] = val;
                        }
                }
            };
            for (int l = 0; l < first_identity; ++l)
                run_block(truncate(vc, opts.levels[l]), l, l + 1);
            if (first_identity < L) run_block(vc, first_identity, L);
        }
    };

    const int jobs = std::min(opts.jobs, nR);
    if (jobs <= 1) {
        for (int rIdx = 0; rIdx < nR; ++rIdx) worker(rIdx);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(jobs);
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back([&, t]() {
                try {
                    for (int rIdx = t; rIdx < nR; rIdx += jobs) worker(rIdx);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    HDistEstimate est;
    est.alpha = opts.alpha;
    est.schedule = opts.schedule;
    est.levels = opts.levels;
    est.entries.reserve(keys);
    for (int j = 0; j < J; ++j)
        for (int m = 0; m < M; ++m)
            for (int p = 0; p < P; ++p)
                for (int s = 0; s < S; ++s) {
                    HDistEntry e;
                    e.j = j;
                    e.m = m;
                    e.phi = phis[p].label;
                    e.psi = psis[s].label;
                    const int key = ((j * M + m) * P + p) * S + s;
                    e.per_level.reserve(L);
                    for (int l = 0; l < L; ++l) {
                        std::vector<cplx> ladder(nR);
                        for (int rIdx = 0; rIdx < nR; ++rIdx)
                            ladder[rIdx] = values[rIdx][key][l];
                        e.per_level.push_back(richardson(opts.schedule, ladder));
                    }
                    e.combined = combine_levels(e.per_level);
                    est.entries.push_back(std::move(e));
                }
    return est;
}

LocalizationResult localization_residual(const ExperimentSetup& setup,
                                         const TestFunction& phi, const Symbol& psi,
                                         int v_component,
                                         const std::vector<double>& schedule,
                                         const LocalizationOptions& opts) {
    if (!setup.constraint)
        throw std::invalid_argument("localization needs a differential constraint");
    require_increasing(schedule, "schedule");
    const DifferentialConstraint& c = *setup.constraint;
    if (v_component < 0 || v_component >= setup.v.components)
        throw std::invalid_argument("localization: v component out of range");

    const AnisotropicWeight weight =
        c.mode == DifferentialConstraint::Mode::Classical
            ? AnisotropicWeight::hoermander(c.nu)
            : AnisotropicWeight::sobolev(c.orders);

    LocalizationResult res;
    res.schedule = schedule;
    for (double r : schedule) {
        const Grid grid = setup.u.grid_for(r);
        if (!(grid == setup.v.grid_for(r)))
            throw std::invalid_argument("families disagree on the grid at r = " +
                                        format_double(r));
        const std::vector<Field> u_mem = setup.u.generate(r);
        const std::vector<Field> v_mem = setup.v.generate(r);
        const std::vector<Field> G = c.residual(u_mem);

        double norm_r = 0.0;
        for (const Field& g : G)
            norm_r = std::max(norm_r, anisotropic_norm(g, 2.0, weight, /*invert=*/true));
        res.residual_norms.push_back(norm_r);

        const Field probe = multiply(phi.materialize(grid), v_mem[v_component]);
        const MultiplierOp smooth = smoothing_op(grid, psi, c.orders, opts.cutoff);
        const Field bw = smooth.apply(probe);

        cplx tel(0.0);
        for (const Field& g : G) tel += pair(g, bw);

        cplx dec(0.0);
        // the gap is judged against the Cauchy-Schwarz size of the term
        // pairings, not their realized values, which cancel for symmetric
        // members and would leave a noise-over-noise ratio
        double termscale = 0.0;
        for (const ConstraintTerm& t : c.terms) {
            const MultiplierOp op = smoothing_derivative_op(
                grid, psi, c.orders, t.axis_orders, opts.cutoff,
                /*conjugate_derivative=*/true);
            const Field cu = apply_coefficient(t.coeff, u_mem[t.component]);
            const Field opp = op.apply(probe);
            dec += pair(cu, opp);
            termscale += lp_norm(cu, 2.0) * lp_norm(opp, 2.0);
        }
        res.telescoped.push_back(tel);
        res.decomposed.push_back(dec);
        const double scale = std::max(termscale + std::abs(tel), 1e-300);
        res.max_rel_gap = std::max(res.max_rel_gap, std::abs(tel - dec) / scale);
    }

    const double max_norm = *std::max_element(res.residual_norms.begin(),
                                              res.residual_norms.end());
    bool ok = max_norm <= opts.hyp_tol;
    if (!ok && res.residual_norms.size() >= 2) {
        bool nonincreasing = true;
        for (std::size_t i = 0; i + 1 < res.residual_norms.size(); ++i)
            if (res.residual_norms[i + 1] > res.residual_norms[i] * (1.0 + 1e-12))
                nonincreasing = false;
        ok = nonincreasing &&
             res.residual_norms.back() <= 0.5 * res.residual_norms.front();
    }
    res.hypothesis_ok = ok;
    if (!ok && opts.enforce_hypothesis)
        throw std::runtime_error(
            "constraint residual fails to vanish along the schedule (max inverted-weight "
            "norm " +
            format_double(max_norm) + ")");
    return res;
}

WaveConeSample wavecone_membership(const DifferentialConstraint& c,
                                   std::span<const double> x,
                                   std::span<const double> xi) {
    const auto sym = c.symbol_matrix(x, xi);
    const int m = c.rows;
    const int n = c.components;
    Eigen::MatrixXd stacked(2 * m, n);
    for (int s = 0; s < m; ++s)
        for (int j = 0; j < n; ++j) {
            stacked(s, j) = sym[s][j].real();
            stacked(m + s, j) = sym[s][j].imag();
        }

    WaveConeSample out;
    out.xi.assign(xi.begin(), xi.end());

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    const double tol = 1e-10 * std::max(smax, 1.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    out.kernel_dim = n - rank;
    out.basis.reserve(out.kernel_dim);
    const Eigen::MatrixXd& V = svd.matrixV();
    for (int k = rank; k < n; ++k) {
        std::vector<double> col(n);
        for (int j = 0; j < n; ++j) col[j] = V(j, k);
        out.basis.push_back(std::move(col));
    }
    return out;
}

ConsistencyResult consistency_check(const DifferentialConstraint& c, const QuadraticForm& Q,
                                    int samples, std::uint64_t seed) {
    if (Q.n != c.components)
        throw std::invalid_argument("consistency check: Q size does not match components");
    if (samples < 1) throw std::invalid_argument("consistency check needs samples >= 1");

    bool varying = !Q.is_constant();
    for (const ConstraintTerm& t : c.terms)
        if (std::holds_alternative<Field>(t.coeff)) varying = true;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> box(0.0, 1.0);

    // coordinate axes first, then random directions
    std::vector<std::vector<double>> dirs;
    for (int a = 0; a < c.dim; ++a) {
        std::vector<double> e(c.dim, 0.0);
        e[a] = 1.0;
        dirs.push_back(e);
    }
    dirs.push_back(std::vector<double>(c.dim, 1.0));
    while (static_cast<int>(dirs.size()) < samples + c.dim + 1) {
        std::vector<double> xi(c.dim);
        double norm2 = 0.0;
        for (double& t : xi) {
            t = unit(rng);
            norm2 += t * t;
        }
        if (norm2 < 0.09) continue;
        dirs.push_back(std::move(xi));
    }

    ConsistencyResult out;
    out.kernel_dim_min = c.components;
    out.kernel_dim_max = 0;
    out.min_eigenvalue = 0.0;
    out.max_abs_eigenvalue = 0.0;
    std::vector<double> x(c.dim, 0.5);
    for (const auto& xi : dirs) {
        if (varying)
            for (double& t : x) t = box(rng);
        const WaveConeSample cone = wavecone_membership(c, x, xi);
        out.kernel_dim_min = std::min(out.kernel_dim_min, cone.kernel_dim);
        out.kernel_dim_max = std::max(out.kernel_dim_max, cone.kernel_dim);
        ++out.samples;
        if (cone.kernel_dim == 0) continue;

        const std::vector<double> qm = Q.matrix_at(x, nullptr);
        Eigen::MatrixXd qmat(Q.n, Q.n);
        for (int j = 0; j < Q.n; ++j)
            for (int k = 0; k < Q.n; ++k) qmat(j, k) = qm[static_cast<std::size_t>(j) * Q.n + k];
        Eigen::MatrixXd K(c.components, cone.kernel_dim);
        for (int k = 0; k < cone.kernel_dim; ++k)
            for (int j = 0; j < c.components; ++j) K(j, k) = cone.basis[k][j];
        const Eigen::MatrixXd restricted = K.transpose() * qmat * K;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(restricted);
        for (int i = 0; i < eig.eigenvalues().size(); ++i) {
            const double ev = eig.eigenvalues()(i);
            out.min_eigenvalue = std::min(out.min_eigenvalue, ev);
            out.max_abs_eigenvalue = std::max(out.max_abs_eigenvalue, std::abs(ev));
        }
    }

    if (out.min_eigenvalue < -1e-10)
        out.verdict = "inconsistent";
    else if (out.max_abs_eigenvalue <= 1e-10)
        out.verdict = "null";
    else
        out.verdict = "consistent";
    return out;
}

StrongConsistencyResult strong_consistency_check(const HDistEstimate& est,
                                                 const QuadraticForm& Q,
                                                 double zero_tol) {
    if (!Q.is_constant())
        throw std::logic_error("strong consistency check needs a constant quadratic form");
    int J = 0, M = 0;
    std::vector<std::string> phi_labels;
    for (const HDistEntry& e : est.entries) {
        J = std::max(J, e.j + 1);
        M = std::max(M, e.m + 1);
        if (std::find(phi_labels.begin(), phi_labels.end(), e.phi) == phi_labels.end())
            phi_labels.push_back(e.phi);
    }
    if (Q.n != J || J != M)
        throw std::invalid_argument("strong consistency check: Q size mismatch");

    StrongConsistencyResult out;
    for (const std::string& phi : phi_labels) {
        StrongRow row;
        row.phi = phi;
        for (int j = 0; j < J; ++j)
            for (int m = 0; m < M; ++m) {
                const double q = Q.constant_at(j, m);
                if (q == 0.0) continue;
                const HDistEntry* e = est.find(j, m, phi, "one");
                if (!e)
                    throw std::logic_error("strong consistency check: missing psi = one entry");
                row.value += q * e->combined.value.real();
                row.error += std::abs(q) *
                             (e->combined.error + std::abs(e->combined.value.imag()));
            }
        const double slack = row.error + zero_tol;
        if (row.value < -slack) {
            row.verdict = "negative beyond error";
            out.nonnegative = false;
            out.all_zero = false;
        } else if (row.value <= slack) {
            row.verdict = "= 0 within error";
        } else {
            row.verdict = ">= 0 within error";
            out.all_zero = false;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace hdistlab
