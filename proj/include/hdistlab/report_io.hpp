#pragma once

// Serialization of experiment reports: a JSON document (schema
// hdistlab-report-v1), a plain-text rendering for the terminal, and a run
// directory layout with one CSV ladder file per component pair.  Output is
// deterministic; nothing here records timestamps or timings.

#include <string>

#include "json.hpp"

#include "hdistlab/compcomp.hpp"

namespace hdistlab {

nlohmann::json report_to_json(const ExperimentReport& rep);
nlohmann::json report_to_json(const OptimalVariantReport& rep);

std::string render_report_text(const ExperimentReport& rep);
std::string render_report_text(const OptimalVariantReport& rep);

// creates dir, writes report.json, and (when an estimate is given) one
// ladders/entry_j<j>_m<m>.csv per component pair with columns
// r,l,phi,psi,re,im,err
void write_run_outputs(const std::string& dir, const nlohmann::json& report,
                       const HDistEstimate* estimate = nullptr);

}  // namespace hdistlab
