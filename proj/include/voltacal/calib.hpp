#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "voltacal/cvdata.hpp"
#include "voltacal/errors.hpp"
#include "voltacal/measured.hpp"

namespace voltacal {

// Constants fixed to the printed precision the reference results were
// computed with; do not "improve" them.
struct PhysicalConstants {
    static constexpr double R = 8.31;     // J/(K*mol)
    static constexpr double F = 96500.0;  // C/mol
};

struct CalibrationPoint {
    double concentration = 0.0;  // mg P/L
    MeasuredQuantity response;   // uA (current axis) or V (potential axis)
};

enum class CurveAxis { current_vs_conc, potential_vs_log10conc };

struct CalibrationCurve {
    CurveAxis axis = CurveAxis::current_vs_conc;
    MeasuredQuantity slope;      // error slot = OLS standard error
    MeasuredQuantity intercept;  // error slot = OLS standard error
    double r2 = 0.0;
    double adj_r2 = 0.0;
    double se_regression = 0.0;
    std::size_t n = 0;
    std::vector<double> residuals;
    double conc_min = 0.0;  // concentration span of the fitted points
    double conc_max = 0.0;

    // 95% confidence half-widths, t(0.975, n-2) * SE. These are what the
    // reference write-up quotes as the +- on its coefficients, so every
    // propagation path below consumes these rather than the bare SEs.
    double slope_ci95() const;
    double intercept_ci95() const;
};

struct LodResult {
    double lod_current_magnitude = 0.0;  // uA
    MeasuredQuantity lod_concentration;  // mg P/L
};

enum class InversionMode { full_precision, paper_rounded };

// invert_concentration reports an out-of-range result as data, not as an
// exception: a sample outside the calibrated span is a finding.
struct InversionResult {
    MeasuredQuantity concentration;  // mg P/L
    bool in_range = true;
};

// Ordinary least squares of response vs concentration (with intercept).
// Needs >= 3 points and >= 3 distinct concentrations.
CalibrationCurve fit_line(const std::vector<CalibrationPoint>& points);

// OLS of response vs log10(concentration). Points at exactly zero
// concentration are dropped (count reported through dropped_blanks when
// non-null); negative concentrations throw NonpositiveConcentration.
CalibrationCurve fit_nernst(const std::vector<CalibrationPoint>& points,
                            std::size_t* dropped_blanks = nullptr);

// 2.303*R*T/F in volts per decade of concentration.
double nernst_slope(double temperature_k);

// Detection limit per the NCCLS recipe: |blank mean| + 1.645*(SD_blank +
// SD_lowest) on current magnitude, then inverted through the curve with
// the uncertainty propagated sum-then-ratio (intercept CI with blank SD in
// quadrature, divided by slope with its CI).
LodResult compute_lod(const CalibrationCurve& curve, const ReplicateSummary& blank,
                      const ReplicateSummary& lowest);

// [P] = (peak - intercept)/slope with quadrature propagation. paper_rounded
// first rounds each coefficient to the decimal place of its CI half-width
// rounded to one significant figure (reproducing hand calculations done on
// the rounded printed equation); errors stay full-precision CI half-widths.
InversionResult invert_concentration(const CalibrationCurve& curve, const MeasuredQuantity& peak,
                                     InversionMode mode = InversionMode::full_precision);

// Fits the non-excluded points, predicts the response at each excluded
// concentration with error sqrt((ci_slope*c)^2 + ci_intercept^2), and
// returns the completed point set (sorted by concentration) for refitting.
std::vector<CalibrationPoint> predict_fill_in(const std::vector<CalibrationPoint>& points,
                                              const std::vector<double>& excluded_concs);

// Rounds value to the decimal place kept by its uncertainty once that
// uncertainty is rounded to one significant figure. Mirrors how quoted
// coefficients like -0.28 +- 0.04 are produced from full-precision fits.
double round_to_error_place(double value, double ci);

// Calibration-point CSV: header `conc_mg_p_l,response,response_sd`.
std::vector<CalibrationPoint> parse_calibration_points(const std::string& csv_text);

}  // namespace voltacal
