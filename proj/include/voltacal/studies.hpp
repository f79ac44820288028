#pragma once

#include <string>
#include <utility>
#include <vector>

#include "voltacal/datasets.hpp"
#include "voltacal/report.hpp"

namespace voltacal {

// Concatenates one factor-level block from each listed table into a single
// balanced design, one A level per block. All blocks must share the same
// concentration grid and replicate count.
FactorialData stack_blocks(const std::vector<std::pair<std::string, std::string>>& table_levels);

// The four batch analyses the CLI exposes under `reproduce`. Each loads only
// bundled fixtures and returns a fully populated report; generated_at is
// left empty for the caller to stamp.
AnalysisReport run_ph_effect();
AnalysisReport run_interference();
AnalysisReport run_dissolved_oxygen();
AnalysisReport run_wastewater();
AnalysisReport run_study(Study study);

// Calibration points a report curve was fitted to, re-derived from the same
// fixtures, for plotting.
std::vector<CalibrationPoint> study_curve_points(Study study, const std::string& curve_name);

}  // namespace voltacal
