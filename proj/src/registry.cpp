#include "hdistlab/registry.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hdistlab {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            return out;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

int parse_axis(const std::string& s, int dim, const std::string& label) {
    int k;
    try {
        k = std::stoi(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("symbol " + label + ": bad axis '" + s + "'");
    }
    if (k < 0 || k >= dim)
        throw std::invalid_argument("symbol " + label + ": axis " + s +
                                    " outside dimension " + std::to_string(dim));
    return k;
}

double exp_smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

}  // namespace

Symbol symbol_from_label(const std::string& label, int dim) {
    const std::vector<std::string> parts = split(label, ':');
    const std::string& head = parts[0];
    Symbol s;
    s.label = label;
    s.smooth_claim = true;

    if (head == "one" && parts.size() == 1) return one_symbol();

    if ((head == "riesz" || head == "parabolic-xi0")) {
        int k = 0;
        if (head == "riesz") {
            if (parts.size() != 2) throw std::invalid_argument("riesz needs one axis: riesz:K");
            k = parse_axis(parts[1], dim, label);
        } else if (parts.size() != 1) {
            throw std::invalid_argument("parabolic-xi0 takes no arguments");
        }
        s.parity = Parity::Odd;
        s.eval = [k](std::span<const double> eta) { return cplx(eta[k]); };
        return s;
    }

    if (head == "monomial") {
        if (parts.size() != 2)
            throw std::invalid_argument("monomial needs exponents: monomial:E0,E1,...");
        const std::vector<std::string> es = split(parts[1], ',');
        if (static_cast<int>(es.size()) != dim)
            throw std::invalid_argument("monomial: exponent count != dimension");
        std::vector<int> exps(dim);
        int degree = 0;
        for (int a = 0; a < dim; ++a) {
            try {
                exps[a] = std::stoi(es[a]);
            } catch (const std::exception&) {
                throw std::invalid_argument("monomial: bad exponent '" + es[a] + "'");
            }
            if (exps[a] < 0) throw std::invalid_argument("monomial: exponents must be >= 0");
            degree += exps[a];
        }
        s.parity = degree % 2 == 0 ? Parity::Even : Parity::Odd;
        s.eval = [exps](std::span<const double> eta) {
            double v = 1.0;
            for (std::size_t a = 0; a < exps.size(); ++a)
                for (int e = 0; e < exps[a]; ++e) v *= eta[a];
            return cplx(v);
        };
        return s;
    }

    if (head == "direction-indicator") {
        if (parts.size() != 3)
            throw std::invalid_argument(
                "direction-indicator needs axis and width: direction-indicator:K:W");
        const int k = parse_axis(parts[1], dim, label);
        double w;
        try {
            w = std::stod(parts[2]);
        } catch (const std::exception&) {
            throw std::invalid_argument("direction-indicator: bad width '" + parts[2] + "'");
        }
        if (!(w > 0.0 && w < 1.0))
            throw std::invalid_argument("direction-indicator: width must lie in (0, 1)");
        s.parity = Parity::Even;
        s.eval = [k, w](std::span<const double> eta) {
            return cplx(exp_smoothstep((eta[k] * eta[k] - (1.0 - w)) / w));
        };
        return s;
    }

    if (head == "parabolic-xixj") {
        if (parts.size() != 3)
            throw std::invalid_argument("parabolic-xixj needs two axes: parabolic-xixj:K:L");
        const int k = parse_axis(parts[1], dim, label);
        const int l = parse_axis(parts[2], dim, label);
        s.parity = Parity::Even;
        s.eval = [k, l](std::span<const double> eta) { return cplx(eta[k] * eta[l]); };
        return s;
    }

    if (head == "abs") {
        if (parts.size() != 2) throw std::invalid_argument("abs needs one axis: abs:K");
        const int k = parse_axis(parts[1], dim, label);
        s.parity = Parity::Even;
        s.smooth_claim = false;
        s.eval = [k](std::span<const double> eta) { return cplx(std::abs(eta[k])); };
        return s;
    }

    throw std::invalid_argument("unknown symbol label: " + label);
}

std::vector<std::pair<std::string, std::string>> symbol_catalog() {
    return {
        {"one", "constant 1; the entry the strong consistency check reads"},
        {"riesz:K", "eta_K, the K-th coordinate on the manifold (odd)"},
        {"monomial:E0,E1,...", "product of coordinate powers; parity follows the degree"},
        {"direction-indicator:K:W", "smooth even window, 1 where eta_K^2 > 1 - W"},
        {"parabolic-xi0", "first-axis coordinate (odd), alias of riesz:0"},
        {"parabolic-xixj:K:L", "eta_K eta_L (even)"},
        {"abs:K", "|eta_K| (even, kink at zero; flagged non-smooth)"},
    };
}

std::vector<std::pair<std::string, std::string>> experiment_catalog() {
    return {
        {"divcurl",
         "orthogonal oscillation pair, divergence/curl constrained, q = u.v"},
        {"oscillation", "modulated single-mode oscillation paired with itself"},
        {"concentration", "L^p-normalized shrinking bump paired with itself"},
        {"counterexample",
         "growing plateau whose truncated pairings all vanish while the raw "
         "interaction keeps mass"},
        {"parabolic",
         "constrained pair on the (t,x) torus riding the anisotropic scaling"},
    };
}

namespace {

Grid parse_grid(const json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("config: grid must be a nonempty array of sizes");
    std::vector<int> sizes;
    for (const auto& v : j) sizes.push_back(v.get<int>());
    return Grid(sizes);
}

ProfileSpec parse_profile(const json& j) {
    ProfileSpec p;
    if (j.contains("center")) p.center = j.at("center").get<std::vector<double>>();
    p.radius = j.value("radius", 0.0);
    p.amplitude = j.value("amplitude", 1.0);
    return p;
}

std::vector<double> parse_numbers(const json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument(std::string("config: ") + what +
                                    " must be a nonempty array");
    return j.get<std::vector<double>>();
}

TestFunction parse_test_function(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "gaussian")
        return gaussian_test(j.at("center").get<std::vector<double>>(),
                             j.at("sigma").get<double>(), j.value("amplitude", 1.0));
    if (type == "constant") return constant_test(j.value("value", 1.0));
    throw std::invalid_argument("config: unknown test function type '" + type + "'");
}

}  // namespace

LoadedExperiment load_experiment(const json& config) {
    if (!config.is_object()) throw std::invalid_argument("config must be a JSON object");
    const std::string schema = config.value("schema", "");
    if (schema != "hdistlab-config-v1")
        throw std::invalid_argument("config: expected schema hdistlab-config-v1, got '" +
                                    schema + "'");
    const std::string kind = config.at("experiment").get<std::string>();

    LoadedExperiment out;
    out.mode = config.value("mode", "standard");
    if (out.mode != "standard" && out.mode != "optimal-variant")
        throw std::invalid_argument("config: mode must be standard or optimal-variant");

    out.config.name = config.value("name", kind);
    out.config.schedule = parse_numbers(config.at("schedule"), "schedule");
    if (config.contains("levels"))
        out.config.levels = parse_numbers(config.at("levels"), "levels");
    else
        out.config.levels = {2.0, 4.0, 8.0};
    out.config.p = config.value("p", 2.0);
    out.config.q = config.value("q", 2.0);
    out.config.jobs = config.value("jobs", 1);
    out.config.enforce_hypothesis = config.value("enforce_hypothesis", true);
    out.config.consistency_samples = config.value("consistency_samples", 64);
    if (config.contains("tolerances")) {
        const json& t = config.at("tolerances");
        out.config.tol.defect_rel = t.value("defect_rel", out.config.tol.defect_rel);
        out.config.tol.residual_rel = t.value("residual_rel", out.config.tol.residual_rel);
        out.config.tol.constraint_norm =
            t.value("constraint_norm", out.config.tol.constraint_norm);
        out.config.tol.strong_zero = t.value("strong_zero", out.config.tol.strong_zero);
        out.config.tol.hypothesis_norm =
            t.value("hypothesis_norm", out.config.tol.hypothesis_norm);
    }

    const json family = config.value("family", json::object());
    if (kind == "divcurl") {
        const Grid grid = parse_grid(config.at("grid"));
        out.setup = divcurl_pair(grid, family.at("k1").get<std::vector<int>>(),
                                 family.at("k2").get<std::vector<int>>());
    } else if (kind == "oscillation") {
        const Grid grid = parse_grid(config.at("grid"));
        const std::string phase = family.value("phase", "cosine");
        if (phase != "cosine" && phase != "exponential")
            throw std::invalid_argument("config: phase must be cosine or exponential");
        SequenceFamily fam = oscillation_family(
            grid, parse_profile(family.value("profile", json::object())),
            family.at("direction").get<std::vector<int>>(),
            phase == "cosine" ? OscillationPhase::Cosine : OscillationPhase::Exponential,
            out.config.p);
        out.setup.u = fam;
        out.setup.v = fam;
        out.setup.Q = QuadraticForm::identity(1);
    } else if (kind == "concentration") {
        const Grid grid = parse_grid(config.at("grid"));
        SequenceFamily fam =
            concentration_family(grid, parse_profile(family.at("profile")),
                                 family.at("x0").get<std::vector<double>>(), out.config.p);
        out.setup.u = fam;
        out.setup.v = fam;
        out.setup.Q = QuadraticForm::identity(1);
    } else if (kind == "counterexample") {
        std::optional<Grid> fixed;
        if (config.contains("grid")) fixed = parse_grid(config.at("grid"));
        SequenceFamily fam = counterexample_family(family.at("x0").get<double>(),
                                                   family.value("r_min", 8.0), fixed);
        out.setup.u = fam;
        out.setup.v = fam;
        out.setup.Q = QuadraticForm::identity(1);
    } else if (kind == "parabolic") {
        ParabolicSpec spec;
        if (family.contains("a")) spec.a = family.at("a").get<double>();
        spec.seed_mode = family.at("seed_mode").get<std::vector<int>>();
        spec.amplitude = family.value("amplitude", 1.0);
        spec.r_max = family.value("r_max", 32.0);
        if (family.contains("forcing")) {
            const json& f = family.at("forcing");
            spec.forcing.gamma = f.value("gamma", 1.0);
            spec.forcing.amplitude = f.value("amplitude", 0.0);
            if (f.contains("center"))
                spec.forcing.center = f.at("center").get<std::vector<double>>();
            spec.forcing.radius = f.value("radius", 0.25);
        }
        out.setup = parabolic_pair(spec);
    } else {
        throw std::invalid_argument("config: unknown experiment kind '" + kind + "'");
    }

    const Grid probe = out.setup.u.grid_for(out.config.schedule.front());
    const int dim = probe.dim();

    if (config.contains("alpha")) {
        out.config.alpha = MultiOrder(parse_numbers(config.at("alpha"), "alpha"));
        if (out.config.alpha.dim() != dim)
            throw std::invalid_argument("config: alpha dimension does not match the grid");
    } else if (out.setup.constraint) {
        out.config.alpha = out.setup.constraint->orders;
    } else {
        out.config.alpha = MultiOrder::isotropic(dim);
    }

    if (config.contains("test_functions")) {
        for (const auto& t : config.at("test_functions"))
            out.config.phis.push_back(parse_test_function(t));
    } else {
        out.config.phis.push_back(gaussian_test(std::vector<double>(dim, 0.5), 0.08));
    }
    if (config.contains("symbols")) {
        for (const auto& s : config.at("symbols"))
            out.config.psis.push_back(symbol_from_label(s.get<std::string>(), dim));
    } else {
        out.config.psis.push_back(one_symbol());
    }
    return out;
}

LoadedExperiment load_experiment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
    }
    return load_experiment(j);
}

}  // namespace hdistlab
