#include "voltacal/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "voltacal/textio.hpp"

namespace voltacal {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

struct Frame {
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;

    double px(double x) const {
        return kMarginLeft + (x - x_min) / (x_max - x_min) * (kWidth - kMarginLeft - kMarginRight);
    }
    double py(double y) const {
        return kHeight - kMarginBottom -
               (y - y_min) / (y_max - y_min) * (kHeight - kMarginTop - kMarginBottom);
    }
};

std::string num(double v) { return format_fixed(v, 2); }

std::string tick_label(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

void expand(double v, double& lo, double& hi) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
}

void pad_range(double& lo, double& hi) {
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
        return;
    }
    const double pad = 0.06 * (hi - lo);
    lo -= pad;
    hi += pad;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

void open_svg(std::string& out, const std::string& title) {
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    out += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">" +
           escape(title) + "</text>\n";
}

void draw_axes(std::string& out, const Frame& f, const std::string& x_label,
               const std::string& y_label) {
    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" +
           num(y0) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" +
           num(y1) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = f.x_min + (f.x_max - f.x_min) * i / 5.0;
        const double px = f.px(fx);
        out += "<line x1=\"" + num(px) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(px) + "\" y2=\"" +
               num(y0 + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + num(px) + "\" y=\"" + num(y0 + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               tick_label(fx) + "</text>\n";
        const double fy = f.y_min + (f.y_max - f.y_min) * i / 5.0;
        const double py = f.py(fy);
        out += "<line x1=\"" + num(x0 - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(x0) +
               "\" y2=\"" + num(py) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + num(x0 - 8) + "\" y=\"" + num(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               tick_label(fy) + "</text>\n";
    }
    out += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           escape(x_label) + "</text>\n";
    out += "<text x=\"16\" y=\"" + num((y0 + y1) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 " +
           num((y0 + y1) / 2) + ")\">" + escape(y_label) + "</text>\n";
}

double axis_x(const CalibrationCurve& curve, double conc) {
    return curve.axis == CurveAxis::current_vs_conc ? conc : std::log10(conc);
}

bool usable(const CalibrationCurve& curve, double conc) {
    return curve.axis == CurveAxis::current_vs_conc || conc > 0.0;
}

}  // namespace

std::string svg_calibration_plot(const std::vector<CalibrationPoint>& points,
                                 const CalibrationCurve& curve, const std::string& title) {
    Frame f;
    f.x_min = f.y_min = std::numeric_limits<double>::infinity();
    f.x_max = f.y_max = -std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        if (!usable(curve, p.concentration)) continue;
        expand(axis_x(curve, p.concentration), f.x_min, f.x_max);
        expand(p.response.value - p.response.error, f.y_min, f.y_max);
        expand(p.response.value + p.response.error, f.y_min, f.y_max);
    }
    expand(curve.slope.value * f.x_min + curve.intercept.value, f.y_min, f.y_max);
    expand(curve.slope.value * f.x_max + curve.intercept.value, f.y_min, f.y_max);
    pad_range(f.x_min, f.x_max);
    pad_range(f.y_min, f.y_max);

    std::string out;
    open_svg(out, title);
    const std::string x_label = curve.axis == CurveAxis::current_vs_conc
                                    ? "concentration (mg P/L)"
                                    : "log10 concentration (mg P/L)";
    const std::string y_label =
        curve.axis == CurveAxis::current_vs_conc ? "peak current (uA)" : "peak potential (V)";
    draw_axes(out, f, x_label, y_label);

    const double gx0 = f.px(f.x_min), gx1 = f.px(f.x_max);
    const double gy0 = f.py(curve.slope.value * f.x_min + curve.intercept.value);
    const double gy1 = f.py(curve.slope.value * f.x_max + curve.intercept.value);
    out += "<line x1=\"" + num(gx0) + "\" y1=\"" + num(gy0) + "\" x2=\"" + num(gx1) + "\" y2=\"" +
           num(gy1) + "\" stroke=\"#1f6fb2\" stroke-width=\"1.5\"/>\n";

    for (const auto& p : points) {
        if (!usable(curve, p.concentration)) continue;
        const double px = f.px(axis_x(curve, p.concentration));
        const double py = f.py(p.response.value);
        if (p.response.error > 0.0) {
            const double ylo = f.py(p.response.value - p.response.error);
            const double yhi = f.py(p.response.value + p.response.error);
            out += "<line x1=\"" + num(px) + "\" y1=\"" + num(ylo) + "\" x2=\"" + num(px) +
                   "\" y2=\"" + num(yhi) + "\" stroke=\"black\"/>\n";
            out += "<line x1=\"" + num(px - 4) + "\" y1=\"" + num(ylo) + "\" x2=\"" +
                   num(px + 4) + "\" y2=\"" + num(ylo) + "\" stroke=\"black\"/>\n";
            out += "<line x1=\"" + num(px - 4) + "\" y1=\"" + num(yhi) + "\" x2=\"" +
                   num(px + 4) + "\" y2=\"" + num(yhi) + "\" stroke=\"black\"/>\n";
        }
        out += "<circle cx=\"" + num(px) + "\" cy=\"" + num(py) +
               "\" r=\"3\" fill=\"#b2361f\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string svg_residual_plot(const std::vector<CalibrationPoint>& points,
                              const CalibrationCurve& curve, const std::string& title) {
    Frame f;
    f.x_min = f.y_min = std::numeric_limits<double>::infinity();
    f.x_max = f.y_max = -std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, double>> res;
    for (const auto& p : points) {
        if (!usable(curve, p.concentration)) continue;
        const double x = axis_x(curve, p.concentration);
        const double r = p.response.value - (curve.slope.value * x + curve.intercept.value);
        res.emplace_back(x, r);
        expand(x, f.x_min, f.x_max);
        expand(r, f.y_min, f.y_max);
    }
    expand(0.0, f.y_min, f.y_max);
    pad_range(f.x_min, f.x_max);
    pad_range(f.y_min, f.y_max);

    std::string out;
    open_svg(out, title);
    const std::string x_label = curve.axis == CurveAxis::current_vs_conc
                                    ? "concentration (mg P/L)"
                                    : "log10 concentration (mg P/L)";
    draw_axes(out, f, x_label, "residual");
    out += "<line x1=\"" + num(f.px(f.x_min)) + "\" y1=\"" + num(f.py(0.0)) + "\" x2=\"" +
           num(f.px(f.x_max)) + "\" y2=\"" + num(f.py(0.0)) +
           "\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>\n";
    for (const auto& [x, r] : res)
        out += "<circle cx=\"" + num(f.px(x)) + "\" cy=\"" + num(f.py(r)) +
               "\" r=\"3\" fill=\"#b2361f\"/>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace voltacal
