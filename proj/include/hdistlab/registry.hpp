#pragma once

// Config-driven construction: symbol bank by label, experiment setups from
// JSON configs (schema "hdistlab-config-v1"), and the catalogs the CLI
// prints under `list`.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hdistlab/compcomp.hpp"

namespace hdistlab {

// Labels:
//   one                              constant 1 (even)
//   riesz:K                          eta_K (odd)
//   monomial:E0,E1,...               prod eta_k^Ek, integer exponents (parity by degree)
//   direction-indicator:K:W          smooth even window, 1 where eta_K^2 > 1 - W
//   parabolic-xi0                    eta_0 (odd), first-axis direction reader
//   parabolic-xixj:K:L               eta_K eta_L (even)
//   abs:K                            |eta_K| (even, kink at eta_K = 0)
Symbol symbol_from_label(const std::string& label, int dim);

std::vector<std::pair<std::string, std::string>> symbol_catalog();
std::vector<std::pair<std::string, std::string>> experiment_catalog();

struct LoadedExperiment {
    ExperimentSetup setup;
    ExperimentConfig config;
    std::string mode = "standard";  // or "optimal-variant"
};

LoadedExperiment load_experiment(const nlohmann::json& config);
LoadedExperiment load_experiment_file(const std::string& path);

}  // namespace hdistlab
