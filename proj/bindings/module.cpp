// Python extension exposing the transform core, the symbol calculus, and the
// experiment drivers.  Fields cross the boundary as complex numpy arrays
// whose shape is the grid; configs and reports cross as JSON strings so the
// python side stays schema-driven.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include <cstring>

#include "hdistlab/acceptance.hpp"
#include "hdistlab/registry.hpp"
#include "hdistlab/report_io.hpp"

namespace py = pybind11;
using namespace hdistlab;

namespace {

using ComplexArray = py::array_t<std::complex<double>,
                                 py::array::c_style | py::array::forcecast>;

Field field_from_array(const ComplexArray& a) {
    std::vector<int> sizes(a.ndim());
    for (py::ssize_t i = 0; i < a.ndim(); ++i) sizes[i] = static_cast<int>(a.shape(i));
    const Grid g(sizes);
    Field f(g);
    std::memcpy(f.values.data(), a.data(), sizeof(cplx) * g.total());
    return f;
}

ComplexArray array_from_values(const Grid& g, const std::vector<cplx>& v) {
    std::vector<py::ssize_t> shape(g.dim());
    for (int i = 0; i < g.dim(); ++i) shape[i] = g.size(i);
    ComplexArray out(shape);
    std::memcpy(out.mutable_data(), v.data(), sizeof(cplx) * g.total());
    return out;
}

MultiOrder order_from_list(const std::vector<double>& alpha) { return MultiOrder(alpha); }

}  // namespace

PYBIND11_MODULE(_hdistlab, m) {
    m.doc() = "pairing experiments for constrained oscillating sequences";

    m.def("forward", [](const ComplexArray& a) {
        const Field f = field_from_array(a);
        return array_from_values(f.grid, forward_transform(f));
    },
          py::arg("field"),
          "forward transform; a pure mode exp(2 pi i k.x) maps to coefficient 1 at k");

    m.def("inverse", [](const ComplexArray& a) {
        std::vector<int> sizes(a.ndim());
        for (py::ssize_t i = 0; i < a.ndim(); ++i)
            sizes[i] = static_cast<int>(a.shape(i));
        const Grid g(sizes);
        Spectrum coeffs(g.total());
        std::memcpy(coeffs.data(), a.data(), sizeof(cplx) * g.total());
        const Field f = inverse_transform(g, coeffs);
        return array_from_values(g, f.values);
    },
          py::arg("coefficients"));

    m.def("lp_norm", [](const ComplexArray& a, double p) {
        return lp_norm(field_from_array(a), p);
    },
          py::arg("field"), py::arg("p"));

    m.def("pairing", [](const ComplexArray& a, const ComplexArray& b) {
        return pair(field_from_array(a), field_from_array(b));
    },
          py::arg("f"), py::arg("g"), "cell volume times sum of f conj(g)");

    m.def("rho", [](const std::vector<double>& xi, const std::vector<double>& alpha) {
        return rho(xi, order_from_list(alpha));
    },
          py::arg("xi"), py::arg("alpha"));

    m.def("project_to_p",
          [](const std::vector<double>& xi, const std::vector<double>& alpha) {
              return project_to_P(xi, order_from_list(alpha));
          },
          py::arg("xi"), py::arg("alpha"));

    m.def("hoermander_weight",
          [](const std::vector<double>& xi, int nu) { return hoermander_weight(xi, nu); },
          py::arg("xi"), py::arg("nu"));

    m.def("apply_symbol",
          [](const ComplexArray& a, const std::string& label,
             const std::vector<double>& alpha) {
              const Field f = field_from_array(a);
              const Symbol s = symbol_from_label(label, f.grid.dim());
              const Field out =
                  apply_projected_symbol(f.grid, s, order_from_list(alpha), f);
              return array_from_values(f.grid, out.values);
          },
          py::arg("field"), py::arg("label"), py::arg("alpha"),
          "apply the operator with symbol label evaluated on the projected frequency");

    m.def("fractional_derivative",
          [](const ComplexArray& a, int axis, double order) {
              const Field f = field_from_array(a);
              return array_from_values(f.grid, fractional_derivative(f, axis, order).values);
          },
          py::arg("field"), py::arg("axis"), py::arg("order"));

    m.def("truncate",
          [](const ComplexArray& a, double level) {
              const Field f = field_from_array(a);
              return array_from_values(f.grid, truncate(f, level).values);
          },
          py::arg("field"), py::arg("level"),
          "keep samples with |v| < level, zero the rest");

    m.def("sobolev_norm",
          [](const ComplexArray& a, double p, const std::vector<double>& alpha,
             bool invert) {
              return anisotropic_norm(field_from_array(a), p,
                                      AnisotropicWeight::sobolev(order_from_list(alpha)),
                                      invert);
          },
          py::arg("field"), py::arg("p"), py::arg("alpha"), py::arg("invert") = false);

    m.def("symbol_labels", [] { return symbol_catalog(); });
    m.def("experiment_kinds", [] { return experiment_catalog(); });

    m.def("run_experiment",
          [](const std::string& config_json, const std::string& output_dir) {
              const nlohmann::json cfg = nlohmann::json::parse(config_json);
              const LoadedExperiment exp = load_experiment(cfg);
              nlohmann::json report;
              int code = 0;
              if (exp.mode == "optimal-variant") {
                  const OptimalVariantReport rep =
                      run_optimal_variant(exp.setup, exp.config);
                  report = report_to_json(rep);
                  for (const auto& row : rep.rows)
                      if (row.sum_gap > 1e-8 * std::max(std::abs(row.raw_defect), 1.0))
                          code = 2;
                  if (!output_dir.empty()) write_run_outputs(output_dir, report);
              } else {
                  const ExperimentReport rep = run_compcomp(exp.setup, exp.config);
                  report = report_to_json(rep);
                  code = rep.exit_code;
                  if (!output_dir.empty())
                      write_run_outputs(output_dir, report, &rep.estimate);
              }
              return py::make_tuple(report.dump(), code);
          },
          py::arg("config_json"), py::arg("output_dir") = std::string(),
          "run a config (schema hdistlab-config-v1); returns (report_json, exit_code)");

    m.def("verify",
          [](const std::string& filter) {
              const AcceptanceSummary sum = verify(filter);
              py::list rows;
              for (const auto& r : sum.results)
                  rows.append(py::make_tuple(r.name, r.pass, r.table, r.ms));
              return py::make_tuple(sum.all_pass, rows);
          },
          py::arg("filter") = std::string(),
          "run acceptance criteria; returns (all_pass, [(name, pass, table, ms)])");
}
