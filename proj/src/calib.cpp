#include "voltacal/calib.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "voltacal/inferstat.hpp"
#include "voltacal/textio.hpp"

namespace voltacal {

namespace {

double student_t975(std::size_t df) {
    return dist_quantile(Dist::student_t, 0.025, df);
}

// Shared OLS core; x/y already on the axis the curve is defined over.
CalibrationCurve ols(const std::vector<double>& xs, const std::vector<double>& ys,
                     CurveAxis axis) {
    const std::size_t n = xs.size();
    const double nn = static_cast<double>(n);

    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x_mean += xs[i];
        y_mean += ys[i];
    }
    x_mean /= nn;
    y_mean /= nn;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - x_mean;
        const double dy = ys[i] - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw DegenerateDesign("all abscissae are equal; no line is identifiable");

    CalibrationCurve c;
    c.axis = axis;
    c.n = n;
    const double slope = sxy / sxx;
    const double intercept = y_mean - slope * x_mean;

    double sse = 0.0;
    c.residuals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (intercept + slope * xs[i]);
        c.residuals.push_back(e);
        sse += e * e;
    }

    c.r2 = syy == 0.0 ? 1.0 : 1.0 - sse / syy;
    c.adj_r2 = 1.0 - (1.0 - c.r2) * (nn - 1.0) / (nn - 2.0);
    c.se_regression = std::sqrt(sse / (nn - 2.0));
    const double se_slope = c.se_regression / std::sqrt(sxx);
    const double se_intercept =
        c.se_regression * std::sqrt(1.0 / nn + x_mean * x_mean / sxx);
    c.slope = {slope, se_slope};
    c.intercept = {intercept, se_intercept};
    return c;
}

// Rounds a coefficient the way a hand calculation on printed values does:
// its uncertainty is quoted to one significant figure and the value keeps
// digits down to that same decimal place.
}  // namespace

double round_to_error_place(double value, double ci) {
    if (!(ci > 0.0)) return value;
    int pos = static_cast<int>(std::floor(std::log10(ci)));
    double scale = std::pow(10.0, pos);
    const double ci_rounded = std::round(ci / scale) * scale;
    // rounding can promote the leading digit (0.096 -> 0.1)
    pos = static_cast<int>(std::floor(std::log10(ci_rounded) + 1e-12));
    scale = std::pow(10.0, pos);
    return std::round(value / scale) * scale;
}

double CalibrationCurve::slope_ci95() const {
    return student_t975(n - 2) * slope.error;
}

double CalibrationCurve::intercept_ci95() const {
    return student_t975(n - 2) * intercept.error;
}

CalibrationCurve fit_line(const std::vector<CalibrationPoint>& points) {
    if (points.size() < 3)
        throw TooFewPoints("need at least 3 calibration points, got " +
                           std::to_string(points.size()));
    std::set<double> distinct;
    for (const auto& p : points) distinct.insert(p.concentration);
    if (distinct.size() == 1)
        throw DegenerateDesign("all calibration points share one concentration");
    if (distinct.size() < 3)
        throw TooFewPoints("need at least 3 distinct concentrations, got " +
                           std::to_string(distinct.size()));

    std::vector<double> xs, ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const auto& p : points) {
        xs.push_back(p.concentration);
        ys.push_back(p.response.value);
    }
    CalibrationCurve c = ols(xs, ys, CurveAxis::current_vs_conc);
    c.conc_min = *distinct.begin();
    c.conc_max = *distinct.rbegin();
    return c;
}

CalibrationCurve fit_nernst(const std::vector<CalibrationPoint>& points,
                            std::size_t* dropped_blanks) {
    std::vector<double> xs, ys;
    double cmin = 0.0, cmax = 0.0;
    std::size_t dropped = 0;
    for (const auto& p : points) {
        if (p.concentration < 0.0)
            throw NonpositiveConcentration("negative concentration " +
                                           format_full(p.concentration) +
                                           " has no logarithm");
        if (p.concentration == 0.0) {
            ++dropped;  // the blank carries no log-axis information
            continue;
        }
        if (xs.empty()) {
            cmin = cmax = p.concentration;
        } else {
            cmin = std::min(cmin, p.concentration);
            cmax = std::max(cmax, p.concentration);
        }
        xs.push_back(std::log10(p.concentration));
        ys.push_back(p.response.value);
    }
    if (dropped_blanks) *dropped_blanks = dropped;
    if (xs.size() < 3)
        throw TooFewPoints("need at least 3 nonzero concentrations, got " +
                           std::to_string(xs.size()));
    CalibrationCurve c = ols(xs, ys, CurveAxis::potential_vs_log10conc);
    c.conc_min = cmin;
    c.conc_max = cmax;
    return c;
}

double nernst_slope(double temperature_k) {
    if (!(temperature_k > 0.0))
        throw std::invalid_argument("temperature must be positive kelvin");
    return 2.303 * PhysicalConstants::R * temperature_k / PhysicalConstants::F;
}

LodResult compute_lod(const CalibrationCurve& curve, const ReplicateSummary& blank,
                      const ReplicateSummary& lowest) {
    if (curve.axis != CurveAxis::current_vs_conc)
        throw std::invalid_argument("LOD is defined on the current-vs-concentration curve");
    if (std::fabs(curve.slope.value) <= 1e-12)
        throw SlopeTooFlat("slope magnitude below 1e-12; inversion undefined");

    LodResult res;
    res.lod_current_magnitude = std::fabs(blank.mean_current.value) +
                                1.645 * (blank.mean_current.error + lowest.mean_current.error);

    // Back onto the signed current axis before inverting.
    const double y = std::copysign(res.lod_current_magnitude, blank.mean_current.value);
    const MeasuredQuantity numerator =
        propagate_sum({{y - curve.intercept.value, curve.intercept_ci95()},
                       {0.0, blank.mean_current.error}});
    res.lod_concentration =
        propagate_ratio(numerator, {curve.slope.value, curve.slope_ci95()});
    return res;
}

InversionResult invert_concentration(const CalibrationCurve& curve, const MeasuredQuantity& peak,
                                     InversionMode mode) {
    if (curve.axis != CurveAxis::current_vs_conc)
        throw std::invalid_argument("inversion is defined on the current-vs-concentration curve");
    if (std::fabs(curve.slope.value) <= 1e-12)
        throw SlopeTooFlat("slope magnitude below 1e-12; inversion undefined");

    const double ci_slope = curve.slope_ci95();
    const double ci_intercept = curve.intercept_ci95();
    double slope = curve.slope.value;
    double intercept = curve.intercept.value;
    if (mode == InversionMode::paper_rounded) {
        slope = round_to_error_place(slope, ci_slope);
        intercept = round_to_error_place(intercept, ci_intercept);
    }

    const MeasuredQuantity numerator =
        propagate_sum({{peak.value - intercept, peak.error}, {0.0, ci_intercept}});
    InversionResult res;
    res.concentration = propagate_ratio(numerator, {slope, ci_slope});
    res.in_range =
        res.concentration.value >= 0.0 && res.concentration.value <= curve.conc_max;
    return res;
}

std::vector<CalibrationPoint> predict_fill_in(const std::vector<CalibrationPoint>& points,
                                              const std::vector<double>& excluded_concs) {
    std::vector<CalibrationPoint> kept;
    for (const auto& p : points) {
        const bool excluded = std::find(excluded_concs.begin(), excluded_concs.end(),
                                        p.concentration) != excluded_concs.end();
        if (!excluded) kept.push_back(p);
    }
    for (double c : excluded_concs) {
        const bool on_grid = std::any_of(points.begin(), points.end(), [&](const auto& p) {
            return p.concentration == c;
        });
        if (!on_grid)
            throw std::invalid_argument("excluded concentration " + format_full(c) +
                                        " is not on the design grid");
    }
    if (excluded_concs.empty()) return points;
    if (kept.size() < 3)
        throw TooFewPoints("fewer than 3 points remain after exclusion");

    const CalibrationCurve base = fit_line(kept);
    std::vector<CalibrationPoint> out = kept;
    for (double c : excluded_concs) {
        const double predicted = base.intercept.value + base.slope.value * c;
        const double err = std::hypot(base.slope_ci95() * c, base.intercept_ci95());
        out.push_back({c, {predicted, err}});
    }
    std::sort(out.begin(), out.end(), [](const auto& lhs, const auto& rhs) {
        return lhs.concentration < rhs.concentration;
    });
    return out;
}

std::vector<CalibrationPoint> parse_calibration_points(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line))
        throw EmptyFile("calibration-point CSV is empty");
    {
        auto header = split_csv(line);
        if (header.size() != 3 || header[0] != "conc_mg_p_l" || header[1] != "response" ||
            header[2] != "response_sd")
            throw MalformedRow("line 1: expected header conc_mg_p_l,response,response_sd");
    }
    std::vector<CalibrationPoint> points;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv(line);
        if (cells.size() != 3)
            throw MalformedRow("line " + std::to_string(lineno) + ": expected 3 columns");
        auto conc = parse_double(cells[0]);
        auto resp = parse_double(cells[1]);
        auto sd = parse_double(cells[2]);
        if (!conc || !resp || !sd)
            throw MalformedRow("line " + std::to_string(lineno) + ": non-numeric cell");
        points.push_back({*conc, {*resp, *sd}});
    }
    if (points.empty()) throw EmptyFile("calibration-point CSV has no data rows");
    return points;
}

}  // namespace voltacal
