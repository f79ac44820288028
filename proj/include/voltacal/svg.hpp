#pragma once

#include <string>
#include <vector>

#include "voltacal/calib.hpp"

namespace voltacal {

// Standalone SVG of a fitted calibration: measured points with +- error
// whiskers, the regression line across the fitted span, ticked axes. Pure
// string building, byte-identical for identical inputs.
std::string svg_calibration_plot(const std::vector<CalibrationPoint>& points,
                                 const CalibrationCurve& curve, const std::string& title);

// Residual scatter (response minus fitted value) about a zero line for the
// same point set.
std::string svg_residual_plot(const std::vector<CalibrationPoint>& points,
                              const CalibrationCurve& curve, const std::string& title);

}  // namespace voltacal
