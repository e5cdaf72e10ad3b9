#include "hdistlab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "hdistlab/compcomp.hpp"
#include "hdistlab/multipliers.hpp"
#include "hdistlab/registry.hpp"
#include "hdistlab/sequences.hpp"

namespace hdistlab {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Table {
    std::string text;
    void line(const std::string& k, const std::string& v) { text += k + " = " + v + "\n"; }
    void num(const std::string& k, double v) { line(k, fmt(v)); }
    void flag(const std::string& k, bool v) { line(k, v ? "yes" : "no"); }
};

ExperimentConfig base_config(const std::string& name, MultiOrder alpha,
                             std::vector<double> schedule, std::vector<double> levels,
                             std::vector<double> phi_center, double phi_sigma) {
    ExperimentConfig cfg;
    cfg.name = name;
    cfg.alpha = std::move(alpha);
    cfg.schedule = std::move(schedule);
    cfg.levels = std::move(levels);
    cfg.phis = {gaussian_test(std::move(phi_center), phi_sigma)};
    cfg.psis = {one_symbol()};
    cfg.jobs = 4;
    return cfg;
}

// 1. The growing plateau: every truncated pairing is identically zero while
// the raw interaction keeps mass 2 at the bump center, and the driver must
// call it out as the reproduced counterexample.
CriterionResult crit_plateau() {
    CriterionResult res;
    res.name = "plateau-defect";
    const double x0 = 0.3;
    SequenceFamily fam = counterexample_family(x0);
    ExperimentSetup setup;
    setup.u = fam;
    setup.v = fam;
    setup.Q = QuadraticForm::identity(1);
    ExperimentConfig cfg =
        base_config("plateau", MultiOrder({1.0}), {8, 16, 32, 64}, {2, 4, 8}, {x0}, 0.05);
    const ExperimentReport rep = run_compcomp(setup, cfg);

    const double phi_at_center = cfg.phis[0].eval(std::vector<double>{x0}).real();
    const double target = 2.0 * phi_at_center;
    const cplx defect = rep.defects.at(0).value;
    const double rel = std::abs(defect.real() - target) / target;
    double max_trunc = 0.0;
    for (const auto& e : rep.estimate.entries)
        max_trunc = std::max(max_trunc, std::abs(e.combined.value));

    Table t;
    t.line("verdict", rep.verdict);
    t.num("defect", defect.real());
    t.num("target", target);
    t.num("defect rel error", rel);
    t.num("defect imag", std::abs(defect.imag()));
    t.num("max truncated pairing", max_trunc);
    t.flag("dominating envelope", rep.domination_ok);
    res.pass = rep.verdict == "counterexample-reproduced" && rel <= 1e-2 &&
               std::abs(defect.imag()) <= 1e-10 && max_trunc <= 1e-10 &&
               !rep.domination_ok;
    res.table = t.text;
    return res;
}

// 2. Projection onto the manifold: unit gauge, oddness, the per-axis power
// identity, and invariance under the anisotropic dilation.
CriterionResult crit_projection() {
    CriterionResult res;
    res.name = "projection-invariants";
    const ProjectionFn fn = [](std::span<const double> xi, const MultiOrder& a) {
        return project_to_P(xi, a);
    };
    const std::vector<std::vector<double>> alphas = {{1, 1}, {1, 2}, {2, 3}};
    Table t;
    res.pass = true;
    for (const auto& a : alphas) {
        std::string note;
        const bool ok =
            projection_invariant_holds(fn, MultiOrder(a), 10000, 17, 1e-12, &note);
        std::string key = "alpha ";
        for (std::size_t i = 0; i < a.size(); ++i) key += (i ? "," : "") + fmt(a[i]);
        t.line(key, (ok ? "ok (" : "VIOLATED (") + note + ")");
        res.pass = res.pass && ok;
    }
    res.table = t.text;
    return res;
}

// 3. Parity against realness: even real symbols keep random real fields
// real, odd ones send them to purely imaginary fields, full band included.
CriterionResult crit_parity() {
    CriterionResult res;
    res.name = "parity-realness";
    const Grid g({32, 32});
    const MultiOrder alpha({1.0, 2.0});
    const std::vector<std::string> evens = {"monomial:2,0", "direction-indicator:0:0.5",
                                            "abs:1", "parabolic-xixj:0:1"};
    const std::vector<std::string> odds = {"riesz:0", "riesz:1", "monomial:1,2"};
    std::vector<Symbol> even_syms, odd_syms;
    for (const auto& l : evens) even_syms.push_back(symbol_from_label(l, 2));
    for (const auto& l : odds) odd_syms.push_back(symbol_from_label(l, 2));

    double worst_even = 0.0, worst_odd = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Field f = random_field(g, 900 + trial, true);
        const double nf = lp_norm(f, 2.0);
        for (const Symbol& s : even_syms) {
            const Field out = apply_projected_symbol(g, s, alpha, f);
            for (const cplx& v : out.values)
                worst_even = std::max(worst_even, std::abs(v.imag()) / nf);
        }
        for (const Symbol& s : odd_syms) {
            const Field out = apply_projected_symbol(g, s, alpha, f);
            for (const cplx& v : out.values)
                worst_odd = std::max(worst_odd, std::abs(v.real()) / nf);
        }
    }
    Table t;
    t.num("even symbols, max imaginary part", worst_even);
    t.num("odd symbols, max real part", worst_odd);
    res.pass = worst_even <= 1e-10 && worst_odd <= 1e-10;
    res.table = t.text;
    return res;
}

// 4. Transform algebra: roundtrip, Plancherel, the pure-mode delta, and
// commuting multiplier composition across dimensions 1 through 4.
CriterionResult crit_transform() {
    CriterionResult res;
    res.name = "transform-algebra";
    const std::vector<Grid> grids = {Grid({32}), Grid({16, 16}), Grid({8, 8, 8}),
                                     Grid({4, 4, 4, 4})};
    double worst_round = 0.0, worst_plancherel = 0.0, worst_delta = 0.0,
           worst_compose = 0.0;
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Grid& g = grids[trial % grids.size()];
        const int d = g.dim();
        const Field f = random_field(g, 100 + trial);
        const Field h = random_field(g, 5000 + trial);
        const double nf = lp_norm(f, 2.0);

        const Spectrum fh = forward_transform(f);
        const Field back = inverse_transform(g, fh);
        for (std::int64_t i = 0; i < g.total(); ++i)
            worst_round =
                std::max(worst_round, std::abs(back.values[i] - f.values[i]) / nf);

        const Spectrum hh = forward_transform(h);
        cplx spectral_sum(0.0);
        for (std::int64_t i = 0; i < g.total(); ++i)
            spectral_sum += fh[i] * std::conj(hh[i]);
        const cplx physical = pair(f, h);
        worst_plancherel = std::max(
            worst_plancherel, std::abs(physical - spectral_sum) / std::max(1.0, std::abs(physical)));

        std::vector<int> mode(d), idx(d);
        for (int a = 0; a < d; ++a) {
            const int half = g.size(a) / 2;
            std::uniform_int_distribution<int> U(-half + 1, half - 1);
            mode[a] = U(rng);
            idx[a] = mode[a] >= 0 ? mode[a] : mode[a] + g.size(a);
        }
        const Field pure = sample(g, [&](std::span<const double> x) {
            double phase = 0.0;
            for (int a = 0; a < d; ++a) phase += mode[a] * x[a];
            return std::polar(1.0, 2.0 * std::numbers::pi * phase);
        });
        const Spectrum ph = forward_transform(pure);
        const std::int64_t at = g.flat_index(idx);
        double off = 0.0;
        for (std::int64_t i = 0; i < g.total(); ++i)
            if (i != at) off += std::norm(ph[i]);
        worst_delta = std::max(worst_delta, std::abs(ph[at] - 1.0));
        worst_delta = std::max(worst_delta, std::sqrt(off));

        const auto s1 = [](std::span<const double> xi) {
            return cplx(std::cos(xi[0] / 3.0) + 0.5);
        };
        const auto s2 = [](std::span<const double> xi) {
            double r2 = 0.0;
            for (double c : xi) r2 += c * c;
            return cplx(1.0 / (1.0 + r2), 0.25);
        };
        const MultiplierOp m1 = make_multiplier(g, s1);
        const MultiplierOp m2 = make_multiplier(g, s2);
        const MultiplierOp m12 = make_multiplier(
            g, [&](std::span<const double> xi) { return s1(xi) * s2(xi); });
        const Field ab = m1.apply(m2.apply(f));
        const Field ba = m2.apply(m1.apply(f));
        const Field prod = m12.apply(f);
        for (std::int64_t i = 0; i < g.total(); ++i) {
            worst_compose =
                std::max(worst_compose, std::abs(ab.values[i] - prod.values[i]) / nf);
            worst_compose =
                std::max(worst_compose, std::abs(ab.values[i] - ba.values[i]) / nf);
        }
    }
    Table t;
    t.num("roundtrip", worst_round);
    t.num("plancherel", worst_plancherel);
    t.num("pure mode delta", worst_delta);
    t.num("composition", worst_compose);
    res.pass = worst_round <= 1e-12 && worst_plancherel <= 1e-12 &&
               worst_delta <= 1e-12 && worst_compose <= 1e-12;
    res.table = t.text;
    return res;
}

// 5. Orthogonal oscillations under divergence/curl constraints: the limit of
// u.v must match the product of the weak limits, and the constrained cone
// must annihilate the form everywhere.
CriterionResult crit_divcurl() {
    CriterionResult res;
    res.name = "divcurl-equality";
    ExperimentSetup setup = divcurl_pair(Grid({512, 512}), {1, 1}, {1, -1});
    ExperimentConfig cfg = base_config("divcurl", MultiOrder::isotropic(2),
                                       {8, 16, 32, 64}, {2, 4, 8}, {0.5, 0.5}, 0.08);
    const ExperimentReport rep = run_compcomp(setup, cfg);

    double worst_rel = 0.0;
    for (const auto& d : rep.defects)
        worst_rel = std::max(worst_rel, std::abs(d.value) / d.scale);

    Table t;
    t.line("verdict", rep.verdict);
    t.num("max defect over scale", worst_rel);
    t.flag("constraints exact", rep.constraint_ok);
    if (rep.consistency) {
        t.line("cone verdict", rep.consistency->verdict);
        t.line("cone kernel dims", std::to_string(rep.consistency->kernel_dim_min) +
                                       ".." +
                                       std::to_string(rep.consistency->kernel_dim_max));
    }
    res.pass = rep.verdict == "confirms-equality" && rep.constraint_ok &&
               rep.consistency && rep.consistency->verdict == "null" &&
               rep.consistency->kernel_dim_min == 2 &&
               rep.consistency->kernel_dim_max == 2 && worst_rel <= 5e-3;
    res.table = t.text;
    return res;
}

// 6. The constrained pair on the (t,x) torus: residuals at rounding level,
// localization hypothesis holds, defect vanishes; a slow forcing with no
// decay must trip the hypothesis check and push the run to inconclusive.
CriterionResult crit_parabolic() {
    CriterionResult res;
    res.name = "parabolic-localization";
    ParabolicSpec spec;
    spec.seed_mode = {1, 1};
    spec.r_max = 32.0;
    ExperimentSetup setup = parabolic_pair(spec);
    ExperimentConfig cfg =
        base_config("parabolic", setup.constraint->orders, {4, 8, 16, 32}, {2, 4, 8},
                    {0.5, 0.5}, 0.08);
    const ExperimentReport rep = run_compcomp(setup, cfg);

    double max_resid = 0.0;
    for (double r : cfg.schedule) {
        const auto mem = setup.u.generate(r);
        for (const Field& row : setup.constraint->residual(mem))
            max_resid = std::max(max_resid, lp_norm(row, 2.0));
    }

    ParabolicSpec bad = spec;
    bad.forcing.amplitude = 0.5;
    bad.forcing.gamma = 0.0;
    bad.forcing.center = {0.5, 0.5};
    ExperimentSetup setup2 = parabolic_pair(bad);
    ExperimentConfig cfg2 = cfg;
    cfg2.name = "parabolic-undecaying-forcing";
    cfg2.enforce_hypothesis = false;
    const ExperimentReport rep2 = run_compcomp(setup2, cfg2);

    double max_resid2 = 0.0;
    for (double r : cfg2.schedule) {
        const auto mem = setup2.u.generate(r);
        for (const Field& row : setup2.constraint->residual(mem))
            max_resid2 = std::max(max_resid2, lp_norm(row, 2.0));
    }
    const double ratio = max_resid2 / std::max(max_resid, 1e-300);

    Table t;
    t.line("verdict", rep.verdict);
    t.num("max constraint residual", max_resid);
    t.flag("localization hypothesis", rep.localization && rep.localization->hypothesis_ok);
    t.line("control verdict", rep2.verdict);
    t.num("control residual", max_resid2);
    t.num("control over clean ratio", ratio);
    t.flag("control hypothesis flagged",
           rep2.localization && !rep2.localization->hypothesis_ok);
    res.pass = rep.verdict == "confirms-equality" && rep.constraint_ok &&
               max_resid <= 1e-10 && rep.localization &&
               rep.localization->hypothesis_ok && rep2.localization &&
               !rep2.localization->hypothesis_ok && ratio >= 10.0 &&
               rep2.verdict == "inconclusive";
    res.table = t.text;
    return res;
}

// 7. First-axis commutator pairing against even symbols on a real field:
// the +-xi contributions must cancel to rounding.
CriterionResult crit_even_cancellation() {
    CriterionResult res;
    res.name = "even-symbol-cancellation";
    ParabolicSpec spec;
    spec.seed_mode = {1, 1};
    spec.r_max = 8.0;
    ExperimentSetup setup = parabolic_pair(spec);
    const double r = 8.0;
    const Field u1 = setup.u.generate(r)[0];
    const Field phi = gaussian_test({0.5, 0.5}, 0.08).materialize(u1.grid);
    const MultiOrder alpha = setup.constraint->orders;

    const std::vector<std::string> labels = {
        "one",          "monomial:2,0",
        "monomial:0,2", "parabolic-xixj:0:1",
        "monomial:4,0", "direction-indicator:0:0.5",
        "direction-indicator:1:0.5", "abs:1"};
    Table t;
    double worst = 0.0;
    for (const auto& l : labels) {
        const CommutatorPairing cp =
            commutator_pairing(u1, phi, symbol_from_label(l, 2), alpha);
        const double ratio = std::abs(cp.value) / std::max(cp.scale, 1e-300);
        t.num(l, ratio);
        worst = std::max(worst, ratio);
    }
    t.num("worst", worst);
    res.pass = worst <= 1e-10;
    res.table = t.text;
    return res;
}

// 8. Pure oscillation against the analytic limit: the pairing with symbol
// psi lands on psi at the projected direction times the profile mass.
CriterionResult crit_oscillation() {
    CriterionResult res;
    res.name = "oscillation-oracle";
    const Grid g({256, 256});
    ProfileSpec prof;
    prof.center = {0.5, 0.5};
    prof.radius = 0.3;
    prof.amplitude = 1.0;
    const TestFunction phi = gaussian_test({0.5, 0.5}, 0.08);
    const Field phiF = phi.materialize(g);
    const Field aF = prof.materialize(g);
    const double mass = pair(multiply(aF, aF), phiF).real();
    const MultiOrder alpha = MultiOrder::isotropic(2);

    std::vector<Symbol> psis = {one_symbol(), symbol_from_label("riesz:0", 2),
                                symbol_from_label("riesz:1", 2),
                                symbol_from_label("direction-indicator:0:0.5", 2)};
    EstimateOptions opts;
    opts.alpha = alpha;
    opts.schedule = {8, 16, 32, 64};
    opts.levels = {4.0};
    opts.jobs = 4;

    Table t;
    double worst = 0.0;
    bool all_found = true;
    for (const std::vector<int>& k : {std::vector<int>{1, 0}, {0, 1}, {1, 1}}) {
        const SequenceFamily fam =
            oscillation_family(g, prof, k, OscillationPhase::Exponential, 2.0);
        const HDistEstimate est =
            estimate_hdistribution(fam, fam, {phi}, psis, opts);
        const std::vector<double> kd(k.begin(), k.end());
        const std::vector<double> eta = project_to_P(kd, alpha);
        for (const Symbol& s : psis) {
            const HDistEntry* e = est.find(0, 0, phi.label, s.label);
            if (!e) {
                all_found = false;
                continue;
            }
            const double expected = s.eval(eta).real() * mass;
            const double err = std::abs(e->combined.value - expected) / mass;
            std::string key = "k " + std::to_string(k[0]) + "," + std::to_string(k[1]) +
                              " psi " + s.label;
            t.num(key, err);
            worst = std::max(worst, err);
        }
    }
    t.num("worst rel error", worst);
    res.pass = all_found && worst <= 0.02;
    res.table = t.text;
    return res;
}

// 9. Truncation laws checked sample by sample: definition, idempotence,
// monotone support growth, identity above the sup, and the tail bound.
CriterionResult crit_truncation() {
    CriterionResult res;
    res.name = "truncation-laws";
    const Grid g({16, 16});
    std::int64_t violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Field f = random_field(g, 7000 + trial);
        const double l1 = 0.3 + 0.01 * trial;
        const double l2 = l1 + 0.4;
        const Field t1 = truncate(f, l1);
        const Field t2 = truncate(f, l2);
        const Field t11 = truncate(t1, l1);
        double sup = 0.0;
        for (const cplx& v : f.values) sup = std::max(sup, std::abs(v));
        const Field ident = truncate(f, sup * (1.0 + 1e-9) + 1e-12);
        for (std::int64_t i = 0; i < g.total(); ++i) {
            const cplx v = f.values[i];
            const cplx kept = std::abs(v) < l1 ? v : cplx(0.0);
            if (t1.values[i] != kept) ++violations;
            if (t11.values[i] != t1.values[i]) ++violations;
            if (std::abs(v) < l1 && t2.values[i] != v) ++violations;
            if (ident.values[i] != v) ++violations;
            const cplx tail = v - t1.values[i];
            if (tail != cplx(0.0) && std::abs(tail) < l1) ++violations;
        }
    }
    Table t;
    t.num("violations", static_cast<double>(violations));
    res.pass = violations == 0;
    res.table = t.text;
    return res;
}

using CriterionFn = CriterionResult (*)();
struct CriterionSpec {
    const char* name;
    CriterionFn fn;
};

const CriterionSpec kCriteria[] = {
    {"plateau-defect", crit_plateau},
    {"projection-invariants", crit_projection},
    {"parity-realness", crit_parity},
    {"transform-algebra", crit_transform},
    {"divcurl-equality", crit_divcurl},
    {"parabolic-localization", crit_parabolic},
    {"even-symbol-cancellation", crit_even_cancellation},
    {"oscillation-oracle", crit_oscillation},
    {"truncation-laws", crit_truncation},
};

CriterionResult timed(const CriterionSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = spec.fn();
    const auto t1 = std::chrono::steady_clock::now();
    r.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return r;
}

}  // namespace

bool projection_invariant_holds(const ProjectionFn& project, const MultiOrder& alpha,
                                int samples, std::uint64_t seed, double tol,
                                std::string* note) {
    const int d = alpha.dim();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-8.0, 8.0);
    double worst = 0.0;
    std::vector<double> xi(d), nxi(d), sxi(d);
    for (int s = 0; s < samples; ++s) {
        double m;
        do {
            m = 0.0;
            for (double& c : xi) {
                c = U(rng);
                m = std::max(m, std::abs(c));
            }
        } while (m < 0.1);
        const std::vector<double> eta = project(xi, alpha);
        worst = std::max(worst, std::abs(rho(eta, alpha) - 1.0));

        // the map rescales by a positive factor, so each coordinate keeps
        // its sign; absolute-value identities alone would miss a flip
        for (int k = 0; k < d; ++k)
            if (eta[k] * xi[k] < 0.0)
                worst = std::max(worst, std::abs(eta[k]));

        for (int k = 0; k < d; ++k) nxi[k] = -xi[k];
        const std::vector<double> neta = project(nxi, alpha);
        for (int k = 0; k < d; ++k) worst = std::max(worst, std::abs(neta[k] + eta[k]));

        const double r = rho(xi, alpha);
        for (int k = 0; k < d; ++k) {
            const double want = std::pow(std::abs(xi[k]), alpha[k]) / r;
            const double got = std::pow(std::abs(eta[k]), alpha[k]);
            worst = std::max(worst, std::abs(got - want) / std::max(1.0, want));
        }

        const double tdil = 1.7;
        for (int k = 0; k < d; ++k) sxi[k] = std::pow(tdil, 1.0 / alpha[k]) * xi[k];
        const std::vector<double> seta = project(sxi, alpha);
        for (int k = 0; k < d; ++k) worst = std::max(worst, std::abs(seta[k] - eta[k]));
        worst = std::max(worst,
                         std::abs(rho(sxi, alpha) - tdil * r) / std::max(1.0, tdil * r));
    }
    if (note)
        *note = "max violation " + fmt(worst) + " over " + std::to_string(samples) +
                " samples";
    return worst <= tol;
}

std::vector<std::string> criterion_names() {
    std::vector<std::string> names;
    for (const auto& c : kCriteria) names.emplace_back(c.name);
    names.emplace_back("determinism");
    return names;
}

AcceptanceSummary verify(const std::string& filter) {
    AcceptanceSummary sum;
    std::vector<const CriterionSpec*> selected;
    for (const auto& c : kCriteria)
        if (std::string(c.name).find(filter) != std::string::npos) selected.push_back(&c);
    const bool want_det =
        filter.empty() || std::string("determinism").find(filter) != std::string::npos;

    for (const CriterionSpec* c : selected) sum.results.push_back(timed(*c));

    if (want_det) {
        // rerun what just ran (everything, when only determinism was asked
        // for) and demand byte-identical tables
        const std::vector<const CriterionSpec*>* base = &selected;
        std::vector<const CriterionSpec*> all;
        if (selected.empty()) {
            for (const auto& c : kCriteria) all.push_back(&c);
            base = &all;
        }
        std::string first, second;
        if (!selected.empty()) {
            for (const auto& r : sum.results) first += r.name + "\n" + r.table;
        } else {
            for (const CriterionSpec* c : *base) {
                const CriterionResult r = c->fn();
                first += r.name + "\n" + r.table;
            }
        }
        const auto t0 = std::chrono::steady_clock::now();
        for (const CriterionSpec* c : *base) {
            const CriterionResult r = c->fn();
            second += r.name + "\n" + r.table;
        }
        const auto t1 = std::chrono::steady_clock::now();

        CriterionResult det;
        det.name = "determinism";
        det.pass = first == second && !first.empty();
        Table t;
        t.num("criteria compared", static_cast<double>(base->size()));
        t.num("table bytes", static_cast<double>(first.size()));
        t.flag("identical across reruns", first == second);
        det.table = t.text;
        det.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        sum.results.push_back(det);
    }

    for (const auto& r : sum.results) sum.all_pass = sum.all_pass && r.pass;
    if (sum.results.empty()) sum.all_pass = false;
    return sum;
}

}  // namespace hdistlab
