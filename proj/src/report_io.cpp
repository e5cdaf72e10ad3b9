#include "hdistlab/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hdistlab {

namespace {

using nlohmann::json;

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json checklist_json(const std::vector<ChecklistItem>& items) {
    json out = json::array();
    for (const auto& it : items)
        out.push_back({{"label", it.label}, {"ok", it.ok}, {"note", it.note}});
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_complex(cplx z) {
    const std::string im = fmt6(std::abs(z.imag()));
    return fmt6(z.real()) + (z.imag() < 0 ? " - " : " + ") + im + "i";
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

json report_to_json(const ExperimentReport& rep) {
    json out;
    out["schema"] = "hdistlab-report-v1";
    out["kind"] = "standard";
    out["name"] = rep.name;
    out["verdict"] = rep.verdict;
    out["exit_code"] = rep.exit_code;
    out["reasons"] = rep.reasons;
    out["exponents"] = {{"p", rep.p},
                        {"q", rep.q},
                        {"p_conj", rep.p_conj},
                        {"q_conj", rep.q_conj},
                        {"classical_l2", rep.classical_l2}};
    out["checklist"] = checklist_json(rep.checklist);
    out["domination_ok"] = rep.domination_ok;
    out["constraint_ok"] = rep.constraint_ok;

    json strong;
    strong["all_zero"] = rep.strong.all_zero;
    strong["nonnegative"] = rep.strong.nonnegative;
    strong["rows"] = json::array();
    for (const auto& row : rep.strong.rows)
        strong["rows"].push_back({{"phi", row.phi},
                                  {"value", row.value},
                                  {"error", row.error},
                                  {"verdict", row.verdict}});
    out["strong_consistency"] = strong;

    if (rep.consistency) {
        const auto& c = *rep.consistency;
        out["consistency"] = {{"verdict", c.verdict},
                              {"min_eigenvalue", c.min_eigenvalue},
                              {"max_abs_eigenvalue", c.max_abs_eigenvalue},
                              {"kernel_dim_min", c.kernel_dim_min},
                              {"kernel_dim_max", c.kernel_dim_max},
                              {"samples", c.samples}};
    }
    if (rep.localization) {
        const auto& l = *rep.localization;
        json loc;
        loc["schedule"] = l.schedule;
        loc["residual_norms"] = l.residual_norms;
        loc["hypothesis_ok"] = l.hypothesis_ok;
        loc["max_rel_gap"] = l.max_rel_gap;
        out["localization"] = loc;
    }

    out["defects"] = json::array();
    for (const auto& d : rep.defects)
        out["defects"].push_back({{"phi", d.phi},
                                  {"value", complex_json(d.value)},
                                  {"error", d.error},
                                  {"converged", d.converged},
                                  {"scale", d.scale}});

    json est;
    est["alpha"] = rep.estimate.alpha.orders;
    est["schedule"] = rep.estimate.schedule;
    est["levels"] = rep.estimate.levels;
    est["entries"] = json::array();
    for (const auto& e : rep.estimate.entries) {
        json levels = json::array();
        for (std::size_t li = 0; li < e.per_level.size(); ++li) {
            const Ladder& lad = e.per_level[li];
            levels.push_back({{"level", rep.estimate.levels[li]},
                              {"value", complex_json(lad.value)},
                              {"error", lad.error},
                              {"converged", lad.converged}});
        }
        est["entries"].push_back({{"j", e.j},
                                  {"m", e.m},
                                  {"phi", e.phi},
                                  {"psi", e.psi},
                                  {"per_level", levels},
                                  {"combined",
                                   {{"value", complex_json(e.combined.value)},
                                    {"error", e.combined.error},
                                    {"converged", e.combined.converged}}}});
    }
    out["estimate"] = est;
    return out;
}

json report_to_json(const OptimalVariantReport& rep) {
    json out;
    out["schema"] = "hdistlab-report-v1";
    out["kind"] = "optimal-variant";
    out["name"] = rep.name;
    out["schedule"] = rep.schedule;
    out["levels"] = rep.levels;
    out["checklist"] = checklist_json(rep.checklist);
    out["domination_ok"] = rep.domination_ok;
    out["rows"] = json::array();
    for (const auto& r : rep.rows)
        out["rows"].push_back({{"phi", r.phi},
                               {"level", r.level},
                               {"tail", complex_json(r.tail)},
                               {"hdist", complex_json(r.hdist)},
                               {"bias", complex_json(r.bias)},
                               {"weak_drift", complex_json(r.weak_drift)},
                               {"sum", complex_json(r.sum)},
                               {"raw_defect", complex_json(r.raw_defect)},
                               {"sum_gap", r.sum_gap},
                               {"tail_norms", r.tail_norms},
                               {"tail_vanishing", r.tail_vanishing}});
    return out;
}

std::string render_report_text(const ExperimentReport& rep) {
    std::string s;
    s += "experiment: " + rep.name + "\n";
    s += "verdict: " + rep.verdict + " (exit " + std::to_string(rep.exit_code) + ")\n";
    s += "exponents: p=" + fmt6(rep.p) + " q=" + fmt6(rep.q) + " p'=" + fmt6(rep.p_conj) +
         " q'=" + fmt6(rep.q_conj) + (rep.classical_l2 ? " [l2 mode]" : "") + "\n";
    s += "checklist:\n";
    for (const auto& it : rep.checklist) {
        s += std::string("  [") + (it.ok ? "ok" : "FAIL") + "] " + it.label;
        if (!it.note.empty()) s += "  " + it.note;
        s += "\n";
    }
    if (rep.consistency) {
        const auto& c = *rep.consistency;
        s += "wave cone: " + c.verdict + ", kernel dim " +
             std::to_string(c.kernel_dim_min) + ".." + std::to_string(c.kernel_dim_max) +
             ", eig range [" + fmt6(c.min_eigenvalue) + ", |max| " +
             fmt6(c.max_abs_eigenvalue) + "] over " + std::to_string(c.samples) +
             " samples\n";
    }
    s += "strong consistency:\n";
    for (const auto& row : rep.strong.rows)
        s += "  " + row.phi + ": " + fmt6(row.value) + " +- " + fmt6(row.error) + "  " +
             row.verdict + "\n";
    if (rep.localization) {
        const auto& l = *rep.localization;
        const double worst =
            l.residual_norms.empty()
                ? 0.0
                : *std::max_element(l.residual_norms.begin(), l.residual_norms.end());
        s += std::string("localization: residual max ") + fmt6(worst) +
             (l.hypothesis_ok ? " (hypothesis ok)" : " (HYPOTHESIS FAILED)") +
             ", telescoping gap " + fmt6(l.max_rel_gap) + "\n";
    }
    s += "defects:\n";
    for (const auto& d : rep.defects)
        s += "  " + d.phi + ": " + fmt_complex(d.value) + " +- " + fmt6(d.error) +
             " (scale " + fmt6(d.scale) + (d.converged ? ")" : ", unconverged)") + "\n";
    if (!rep.reasons.empty()) {
        s += "reasons:\n";
        for (const auto& r : rep.reasons) s += "  - " + r + "\n";
    }
    return s;
}

std::string render_report_text(const OptimalVariantReport& rep) {
    std::string s;
    s += "experiment: " + rep.name + " (optimal variant)\n";
    s += "checklist:\n";
    for (const auto& it : rep.checklist) {
        s += std::string("  [") + (it.ok ? "ok" : "FAIL") + "] " + it.label;
        if (!it.note.empty()) s += "  " + it.note;
        s += "\n";
    }
    for (const auto& r : rep.rows) {
        s += "phi " + r.phi + ", level " + fmt6(r.level) + ":\n";
        s += "  tail        " + fmt_complex(r.tail) + "\n";
        s += "  hdist       " + fmt_complex(r.hdist) + "\n";
        s += "  bias        " + fmt_complex(r.bias) + "\n";
        s += "  weak drift  " + fmt_complex(r.weak_drift) + "\n";
        s += "  sum         " + fmt_complex(r.sum) + "  vs raw defect " +
             fmt_complex(r.raw_defect) + " (gap " + fmt6(r.sum_gap) + ")\n";
        s += std::string("  tail norms  ");
        for (std::size_t i = 0; i < r.tail_norms.size(); ++i)
            s += (i ? ", " : "") + fmt6(r.tail_norms[i]);
        s += r.tail_vanishing ? "  (vanishing)\n" : "  (NOT vanishing)\n";
    }
    return s;
}

void write_run_outputs(const std::string& dir, const json& report,
                       const HDistEstimate* estimate) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(dir + "/report.json");
        if (!out) throw std::runtime_error("cannot write " + dir + "/report.json");
        out << report.dump(2) << "\n";
    }
    if (!estimate) return;
    fs::create_directories(dir + "/ladders");
    std::ofstream csv;
    int open_j = -1, open_m = -1;
    for (const auto& e : estimate->entries) {
        if (e.j != open_j || e.m != open_m) {
            const std::string path = dir + "/ladders/entry_j" + std::to_string(e.j) +
                                     "_m" + std::to_string(e.m) + ".csv";
            csv.close();
            csv.open(path);
            if (!csv) throw std::runtime_error("cannot write " + path);
            csv << "r,l,phi,psi,re,im,err\n";
            open_j = e.j;
            open_m = e.m;
        }
        for (std::size_t li = 0; li < e.per_level.size(); ++li) {
            const Ladder& lad = e.per_level[li];
            for (std::size_t ri = 0; ri < lad.raw.size(); ++ri) {
                const double drift =
                    ri == 0 ? 0.0
                            : std::abs(lad.extrapolants[ri] - lad.extrapolants[ri - 1]);
                csv << fmt(estimate->schedule[ri]) << ',' << fmt(estimate->levels[li])
                    << ',' << csv_quote(e.phi) << ',' << csv_quote(e.psi) << ','
                    << fmt(lad.raw[ri].real()) << ',' << fmt(lad.raw[ri].imag()) << ','
                    << fmt(drift) << "\n";
            }
        }
    }
}

}  // namespace hdistlab
