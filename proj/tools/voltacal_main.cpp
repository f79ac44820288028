#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "voltacal/datasets.hpp"
#include "voltacal/report.hpp"
#include "voltacal/simulate.hpp"
#include "voltacal/studies.hpp"
#include "voltacal/svg.hpp"
#include "voltacal/textio.hpp"

namespace {

using namespace voltacal;

Window parse_window(const std::string& spec) {
    const auto parts = split_csv(spec);
    const auto lo = parts.size() == 2 ? parse_double(parts[0]) : std::nullopt;
    const auto hi = parts.size() == 2 ? parse_double(parts[1]) : std::nullopt;
    if (!lo || !hi || !(*lo < *hi))
        throw std::invalid_argument("--window expects LO,HI with LO < HI, got '" + spec + "'");
    return Window{*lo, *hi};
}

std::string now_rfc3339() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// short curve handles the lod/invert subcommands accept
const std::map<std::string, std::pair<Study, std::string>>& curve_routes() {
    static const std::map<std::string, std::pair<Study, std::string>> routes = {
        {"ph8", {Study::ph_effect, "ph8_current"}},
        {"ph4", {Study::ph_effect, "ph4_current"}},
        {"cl", {Study::interference, "chloride_100"}},
        {"so4", {Study::interference, "sulphate_100"}},
        {"no3", {Study::interference, "nitrate_100"}},
        {"do1", {Study::dissolved_oxygen, "do_1.00"}},
    };
    return routes;
}

CalibrationCurve curve_by_handle(const std::string& handle) {
    const auto it = curve_routes().find(handle);
    if (it == curve_routes().end())
        throw std::invalid_argument("unknown curve '" + handle + "'; expected one of "
                                    "ph8, ph4, cl, so4, no3, do1");
    const AnalysisReport rep = run_study(it->second.first);
    for (const auto& c : rep.curves)
        if (c.name == it->second.second) return c.curve;
    throw std::runtime_error("curve " + it->second.second + " missing from study report");
}

struct Options {
    std::vector<std::string> files;
    std::string window;
    std::string format;
    std::string axis = "current";
    std::string mode = "full";
    std::string curve;
    std::string model_file;
    std::string out_dir;
    std::string study;
    std::vector<std::string> tables;
    double alpha = 0.05;
    double peak = 0.0;
    double peak_sd = 0.0;
    double mean = 0.0;
    double mu0 = 0.0;
    double sd = 0.0;
    double conc = 0.0;
    std::size_t n = 0;
    std::size_t df = 0;
    bool df_set = false;
    std::uint64_t seed = 0;
};

int cmd_peaks(const Options& opt) {
    const Window window = opt.window.empty() ? Window{} : parse_window(opt.window);
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    std::string csv = "file,peak_potential_v,peak_current_ua\n";
    for (const auto& file : opt.files) {
        SampleMeta meta;
        meta.sample_id = file;
        const Voltammogram v = parse_voltammogram(read_text_file(file), meta);
        const PeakFeature peak = detect_peak(v, window);
        if (opt.format == "json") {
            nlohmann::ordered_json e;
            e["file"] = file;
            e["peak_potential_v"] = peak.peak_potential;
            e["peak_current_ua"] = peak.peak_current;
            arr.push_back(e);
        } else if (opt.format == "csv") {
            csv += file + "," + format_full(peak.peak_potential) + "," +
                   format_full(peak.peak_current) + "\n";
        } else {
            std::cout << file << ": E_p = " << format_full(peak.peak_potential)
                      << " V, i_p = " << format_full(peak.peak_current) << " uA\n";
        }
    }
    if (opt.format == "json")
        std::cout << arr.dump(2) << "\n";
    else if (opt.format == "csv")
        std::cout << csv;
    return 0;
}

int print_curve(const NamedCurve& nc, const std::string& format) {
    const CalibrationCurve& c = nc.curve;
    if (format == "json") {
        AnalysisReport rep;
        rep.study = Study::custom;
        rep.curves.push_back(nc);
        std::cout << report_to_json(rep);
    } else if (format == "csv") {
        std::cout << "slope,slope_se,intercept,intercept_se,r2,adj_r2,se_regression,n\n"
                  << format_full(c.slope.value) << "," << format_full(c.slope.error) << ","
                  << format_full(c.intercept.value) << "," << format_full(c.intercept.error)
                  << "," << format_full(c.r2) << "," << format_full(c.adj_r2) << ","
                  << format_full(c.se_regression) << "," << c.n << "\n";
    } else {
        std::cout << "slope:      " << format_full(c.slope.value) << " (SE "
                  << format_full(c.slope.error) << ", 95% CI +-" << format_full(c.slope_ci95())
                  << ")\n";
        std::cout << "intercept:  " << format_full(c.intercept.value) << " (SE "
                  << format_full(c.intercept.error) << ", 95% CI +-"
                  << format_full(c.intercept_ci95()) << ")\n";
        std::cout << "r2:         " << format_full(c.r2) << "  (adjusted "
                  << format_full(c.adj_r2) << ")\n";
        std::cout << "se:         " << format_full(c.se_regression) << "\n";
        std::cout << "n:          " << c.n << "\n";
        std::cout << "quoted:     (" << nc.printed_slope << ")x + (" << nc.printed_intercept
                  << ")\n";
    }
    return 0;
}

int cmd_calibrate(const Options& opt) {
    const auto points = parse_calibration_points(read_text_file(opt.files[0]));
    NamedCurve nc;
    nc.name = std::filesystem::path(opt.files[0]).stem().string();
    nc.curve = opt.axis == "potential" ? fit_nernst(points) : fit_line(points);
    nc.printed_slope = printed_coefficient(nc.curve.slope.value, nc.curve.slope_ci95());
    nc.printed_intercept =
        printed_coefficient(nc.curve.intercept.value, nc.curve.intercept_ci95());
    return print_curve(nc, opt.format);
}

int cmd_lod(const Options& opt) {
    if (opt.curve != "ph8" && opt.curve != "ph4")
        throw std::invalid_argument("lod supports --curve ph8 or ph4 (the series with bundled "
                                    "blank replicates)");
    const AnalysisReport rep = run_ph_effect();
    for (const auto& l : rep.lods) {
        if (l.name != opt.curve) continue;
        if (opt.format == "json") {
            nlohmann::ordered_json e;
            e["name"] = l.name;
            e["current_magnitude_ua"] = l.lod.lod_current_magnitude;
            e["concentration_mg_p_l"] = l.lod.lod_concentration.value;
            e["concentration_err"] = l.lod.lod_concentration.error;
            e["printed"] = l.printed;
            std::cout << e.dump(2) << "\n";
        } else {
            std::cout << "LOD current magnitude: " << format_full(l.lod.lod_current_magnitude)
                      << " uA\n";
            std::cout << "LOD: " << format_full(l.lod.lod_concentration.value) << " +- "
                      << format_full(l.lod.lod_concentration.error) << " mg P/L\n";
            std::cout << "quoted: " << l.printed << "\n";
        }
        return 0;
    }
    throw std::runtime_error("lod " + opt.curve + " missing from study report");
}

int cmd_anova(const Options& opt) {
    FactorialData data = [&] {
        if (opt.tables.size() == 1) return load_table(opt.tables[0]).to_factorial();
        // several ids: stack each table's leading factor level
        std::vector<std::pair<std::string, std::string>> blocks;
        for (const auto& id : opt.tables)
            blocks.emplace_back(id, load_table(id).factor_levels.at(0));
        return stack_blocks(blocks);
    }();
    const AnovaTable table = two_way_anova(data, opt.alpha);
    if (opt.format == "csv") {
        std::cout << anova_to_csv(table);
    } else if (opt.format == "json") {
        AnalysisReport rep;
        rep.study = Study::custom;
        std::string name;
        for (const auto& id : opt.tables) name += (name.empty() ? "" : "+") + id;
        rep.anova.push_back({name, table, data.duplicated});
        rep.provenance.inputs = opt.tables;
        std::cout << report_to_json(rep);
    } else {
        std::cout << anova_to_text(table);
        if (data.duplicated)
            std::cout << "note: replicates were tiled to balance the design\n";
    }
    return 0;
}

int cmd_ttest(const Options& opt) {
    const std::size_t df = opt.df_set ? opt.df : opt.n - 1;
    const TTestResult r = one_sample_t(opt.mean, opt.mu0, opt.sd, opt.n, df, opt.alpha);
    if (opt.format == "json") {
        nlohmann::ordered_json e;
        e["t"] = r.t;
        e["df"] = r.df;
        e["t_critical"] = r.t_critical;
        e["alpha"] = r.alpha;
        e["reject_null"] = r.reject_null;
        std::cout << e.dump(2) << "\n";
    } else {
        std::cout << "t = " << format_full(r.t) << ", t_critical(alpha " << format_full(r.alpha)
                  << ", df " << r.df << ") = " << format_full(r.t_critical) << " -> "
                  << (r.reject_null ? "reject" : "accept") << " null hypothesis\n";
    }
    return 0;
}

int cmd_invert(const Options& opt) {
    const CalibrationCurve curve = curve_by_handle(opt.curve);
    const InversionMode mode =
        opt.mode == "paper" ? InversionMode::paper_rounded : InversionMode::full_precision;
    const InversionResult res = invert_concentration(curve, {opt.peak, opt.peak_sd}, mode);
    if (!res.in_range) {
        std::cout << "Out of Range\n";
        return 0;
    }
    if (mode == InversionMode::paper_rounded)
        std::cout << printed_interval(res.concentration, "mg P/L") << "\n";
    else
        std::cout << format_full(res.concentration.value) << " +- "
                  << format_full(res.concentration.error) << " mg P/L\n";
    return 0;
}

int cmd_simulate(const Options& opt) {
    SensorModel model;
    if (!opt.model_file.empty()) {
        model = sensor_model_from_json(read_text_file(opt.model_file));
    } else {
        // quoted pH-8 coefficients as a convenient default scenario
        model.response_slope = -0.28;
        model.response_intercept = -30.4;
    }
    const Voltammogram v = synth_voltammogram(model, opt.conc, opt.seed);
    const std::string csv = serialize_voltammogram(v);
    if (opt.out_dir.empty()) {
        std::cout << csv;
    } else {
        std::filesystem::create_directories(opt.out_dir);
        const std::string path = opt.out_dir + "/sweep_conc" + format_full(opt.conc) + "_seed" +
                                 std::to_string(opt.seed) + ".csv";
        write_text_file(path, csv);
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

int cmd_reproduce(const Options& opt) {
    const auto study = study_from_name(opt.study);
    if (!study || *study == Study::custom)
        throw std::invalid_argument("unknown study '" + opt.study + "'; expected ph_effect, "
                                    "interference, dissolved_oxygen or wastewater");
    AnalysisReport rep = run_study(*study);
    rep.generated_at = now_rfc3339();

    const std::string json_text = report_to_json(rep);
    std::string schema_err;
    if (!validate_json_schema(json_text, report_schema_json(), &schema_err))
        throw std::runtime_error("internal: report fails its schema: " + schema_err);

    const std::string dir = opt.out_dir.empty() ? "out" : opt.out_dir;
    std::filesystem::create_directories(dir);
    const std::string base = dir + "/" + study_name(*study);

    write_text_file(base + "_report.json", json_text);
    std::cout << "wrote " << base + "_report.json" << "\n";
    for (const auto& a : rep.anova) {
        write_text_file(base + "_anova_" + a.name + ".csv", anova_to_csv(a.table));
        std::cout << "wrote " << base + "_anova_" + a.name + ".csv" << "\n";
    }
    for (const auto& c : rep.curves) {
        const auto points = study_curve_points(*study, c.name);
        write_text_file(base + "_curve_" + c.name + ".svg",
                        svg_calibration_plot(points, c.curve, c.name));
        write_text_file(base + "_residuals_" + c.name + ".svg",
                        svg_residual_plot(points, c.curve, c.name + " residuals"));
        std::cout << "wrote " << base + "_curve_" + c.name + ".svg"
                  << " and " << base + "_residuals_" + c.name + ".svg" << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"calibration and inference toolkit for cobalt-electrode phosphate sensing"};
    app.require_subcommand(1);
    Options opt;

    auto* peaks = app.add_subcommand("peaks", "extract cathodic peaks from voltammogram CSVs");
    peaks->add_option("files", opt.files, "voltammogram CSV files")->required();
    peaks->add_option("--window", opt.window, "peak search window LO,HI in volts");
    peaks->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    auto* calibrate = app.add_subcommand("calibrate", "fit a calibration line to points");
    calibrate->add_option("file", opt.files, "calibration points CSV")
        ->required()
        ->expected(1);
    calibrate->add_option("--axis", opt.axis, "current (vs conc) or potential (vs log10 conc)")
        ->check(CLI::IsMember({"current", "potential"}));
    calibrate->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    auto* lod = app.add_subcommand("lod", "detection limit from bundled blank replicates");
    lod->add_option("--curve", opt.curve, "calibration series: ph8 or ph4")->required();
    lod->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    auto* anova = app.add_subcommand("anova", "two-way ANOVA of bundled replicate tables");
    anova->add_option("--tables", opt.tables,
                      "table ids; several ids stack each table's leading factor level")
        ->required()
        ->delimiter(',');
    anova->add_option("--alpha", opt.alpha, "significance level");
    anova->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    auto* ttest = app.add_subcommand("ttest", "two-tailed one-sample t test");
    ttest->add_option("--mean", opt.mean, "sample mean")->required();
    ttest->add_option("--mu0", opt.mu0, "reference value")->required();
    ttest->add_option("--sd", opt.sd, "sample standard deviation")->required();
    ttest->add_option("--n", opt.n, "number of replicates")->required();
    ttest->add_option("--df", opt.df, "degrees of freedom (default n-1)");
    ttest->add_option("--alpha", opt.alpha, "significance level");
    ttest->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    auto* invert = app.add_subcommand("invert", "peak current to concentration");
    invert->add_option("--curve", opt.curve, "ph8, ph4, cl, so4, no3 or do1")->required();
    invert->add_option("--peak", opt.peak, "peak current in uA")->required();
    invert->add_option("--peak-sd", opt.peak_sd, "replicate SD of the peak current");
    invert->add_option("--mode", opt.mode, "full precision or rounded quoted coefficients")
        ->check(CLI::IsMember({"full", "paper"}));

    auto* simulate = app.add_subcommand("simulate", "synthesize a voltammogram sweep");
    simulate->add_option("--conc", opt.conc, "phosphate concentration in mg P/L")->required();
    simulate->add_option("--seed", opt.seed, "noise seed");
    simulate->add_option("--model", opt.model_file, "sensor model JSON config");
    simulate->add_option("--out", opt.out_dir, "directory to write the sweep into");

    auto* reproduce = app.add_subcommand("reproduce", "run a bundled study end to end");
    reproduce
        ->add_option("study", opt.study,
                     "ph_effect, interference, dissolved_oxygen or wastewater")
        ->required();
    reproduce->add_option("--out", opt.out_dir, "output directory (default out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        opt.df_set = ttest->count("--df") > 0;
        if (peaks->parsed()) return cmd_peaks(opt);
        if (calibrate->parsed()) return cmd_calibrate(opt);
        if (lod->parsed()) return cmd_lod(opt);
        if (anova->parsed()) return cmd_anova(opt);
        if (ttest->parsed()) return cmd_ttest(opt);
        if (invert->parsed()) return cmd_invert(opt);
        if (simulate->parsed()) return cmd_simulate(opt);
        if (reproduce->parsed()) return cmd_reproduce(opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        const bool numerical = dynamic_cast<const DivisionByZero*>(&e) != nullptr ||
                               dynamic_cast<const SlopeTooFlat*>(&e) != nullptr ||
                               dynamic_cast<const NonConvergence*>(&e) != nullptr ||
                               dynamic_cast<const ZeroVariance*>(&e) != nullptr ||
                               dynamic_cast<const DegenerateDesign*>(&e) != nullptr;
        return numerical ? 3 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
