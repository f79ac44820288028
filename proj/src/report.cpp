#include "voltacal/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "voltacal/textio.hpp"

namespace voltacal {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* axis_name(CurveAxis axis) {
    return axis == CurveAxis::current_vs_conc ? "current_vs_conc" : "potential_vs_log10conc";
}

ojson curve_json(const NamedCurve& c) {
    ojson j;
    j["name"] = c.name;
    j["axis"] = axis_name(c.curve.axis);
    j["slope"] = c.curve.slope.value;
    j["slope_se"] = c.curve.slope.error;
    j["slope_ci95"] = c.curve.slope_ci95();
    j["intercept"] = c.curve.intercept.value;
    j["intercept_se"] = c.curve.intercept.error;
    j["intercept_ci95"] = c.curve.intercept_ci95();
    j["r2"] = c.curve.r2;
    j["adj_r2"] = c.curve.adj_r2;
    j["se_regression"] = c.curve.se_regression;
    j["n"] = c.curve.n;
    j["conc_min"] = c.curve.conc_min;
    j["conc_max"] = c.curve.conc_max;
    j["printed_slope"] = c.printed_slope;
    j["printed_intercept"] = c.printed_intercept;
    return j;
}

ojson anova_json(const NamedAnova& a) {
    ojson j;
    j["name"] = a.name;
    j["alpha"] = a.table.alpha;
    j["duplicated_replicates"] = a.duplicated_replicates;
    j["rows"] = ojson::array();
    for (const auto& row : a.table.rows) {
        ojson r;
        r["source"] = row.source;
        r["ss"] = row.ss;
        r["df"] = row.df;
        if (row.ms) r["ms"] = *row.ms;
        if (row.f) r["f"] = *row.f;
        if (row.p_value) r["p_value"] = *row.p_value;
        if (row.f_critical) r["f_critical"] = *row.f_critical;
        j["rows"].push_back(r);
    }
    return j;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string g6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// type / properties / required / items / enum / additionalProperties subset
bool fail_at(std::string* err, const std::string& path, const std::string& what) {
    if (err) *err = path + ": " + what;
    return false;
}

bool type_matches(const json& doc, const std::string& t) {
    if (t == "object") return doc.is_object();
    if (t == "array") return doc.is_array();
    if (t == "string") return doc.is_string();
    if (t == "number") return doc.is_number();
    if (t == "integer") return doc.is_number_integer();
    if (t == "boolean") return doc.is_boolean();
    if (t == "null") return doc.is_null();
    return false;
}

bool schema_check(const json& doc, const json& schema, const std::string& path,
                  std::string* err) {
    if (schema.contains("type")) {
        const std::string t = schema["type"].get<std::string>();
        if (!type_matches(doc, t)) return fail_at(err, path, "expected type " + t);
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& v : schema["enum"])
            if (v == doc) {
                ok = true;
                break;
            }
        if (!ok) return fail_at(err, path, "value not in enum");
    }
    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const auto& r : schema["required"]) {
                const std::string key = r.get<std::string>();
                if (!doc.contains(key))
                    return fail_at(err, path, "missing required property " + key);
            }
        const bool closed = schema.contains("additionalProperties") &&
                            schema["additionalProperties"].is_boolean() &&
                            !schema["additionalProperties"].get<bool>();
        const json empty = json::object();
        const json& props = schema.contains("properties") ? schema["properties"] : empty;
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (props.contains(it.key())) {
                if (!schema_check(it.value(), props[it.key()], path + "/" + it.key(), err))
                    return false;
            } else if (closed) {
                return fail_at(err, path, "unexpected property " + it.key());
            }
        }
    }
    if (doc.is_array() && schema.contains("items"))
        for (std::size_t i = 0; i < doc.size(); ++i)
            if (!schema_check(doc[i], schema["items"], path + "/" + std::to_string(i), err))
                return false;
    return true;
}

}  // namespace

std::string study_name(Study study) {
    switch (study) {
        case Study::ph_effect: return "ph_effect";
        case Study::interference: return "interference";
        case Study::dissolved_oxygen: return "dissolved_oxygen";
        case Study::wastewater: return "wastewater";
        case Study::custom: break;
    }
    return "custom";
}

std::optional<Study> study_from_name(const std::string& name) {
    for (Study s : {Study::ph_effect, Study::interference, Study::dissolved_oxygen,
                    Study::wastewater, Study::custom})
        if (study_name(s) == name) return s;
    return std::nullopt;
}

std::string printed_interval(const MeasuredQuantity& mq, const std::string& unit) {
    const long long v = std::llround(mq.value);
    const long long e = std::llround(std::fabs(mq.error));
    return "(" + std::to_string(v) + " ± " + std::to_string(e) + ") " + unit;
}

std::string printed_coefficient(double value, double ci) {
    if (!(ci > 0.0)) return format_full(value);
    int pos = static_cast<int>(std::floor(std::log10(std::fabs(ci))));
    const double scale = std::pow(10.0, pos);
    const double ci_rounded = std::round(ci / scale) * scale;
    pos = static_cast<int>(std::floor(std::log10(ci_rounded) + 1e-12));
    const int decimals = pos < 0 ? -pos : 0;
    return format_fixed(round_to_error_place(value, ci), decimals) + " ± " +
           format_fixed(ci_rounded, decimals);
}

std::string report_to_json(const AnalysisReport& report) {
    ojson j;
    j["study"] = study_name(report.study);
    j["curves"] = ojson::array();
    for (const auto& c : report.curves) j["curves"].push_back(curve_json(c));
    j["lods"] = ojson::array();
    for (const auto& l : report.lods) {
        ojson e;
        e["name"] = l.name;
        e["current_magnitude_ua"] = l.lod.lod_current_magnitude;
        e["concentration_mg_p_l"] = l.lod.lod_concentration.value;
        e["concentration_err"] = l.lod.lod_concentration.error;
        e["printed"] = l.printed;
        j["lods"].push_back(e);
    }
    j["anova"] = ojson::array();
    for (const auto& a : report.anova) j["anova"].push_back(anova_json(a));
    j["inversions"] = ojson::array();
    for (const auto& inv : report.inversions) {
        ojson e;
        e["sample_id"] = inv.sample_id;
        e["concentration_mg_p_l"] = inv.concentration.value;
        e["concentration_err"] = inv.concentration.error;
        e["in_range"] = inv.in_range;
        e["printed"] = inv.printed;
        j["inversions"].push_back(e);
    }
    j["ttests"] = ojson::array();
    for (const auto& t : report.ttests) {
        ojson e;
        e["name"] = t.name;
        e["t"] = t.test.t;
        e["df"] = t.test.df;
        e["t_critical"] = t.test.t_critical;
        e["alpha"] = t.test.alpha;
        e["reject_null"] = t.test.reject_null;
        j["ttests"].push_back(e);
    }
    j["provenance"] = ojson::object();
    j["provenance"]["inputs"] = report.provenance.inputs;
    j["provenance"]["tool_version"] = report.provenance.tool_version;
    j["generated_at"] = report.generated_at;
    return j.dump(2) + "\n";
}

std::string anova_to_csv(const AnovaTable& table) {
    std::string out = "Source,SS,df,MS,F,P-Value,F-Critical\n";
    for (const auto& row : table.rows) {
        out += row.source + "," + format_full(row.ss) + "," + std::to_string(row.df) + ",";
        out += (row.ms ? format_full(*row.ms) : std::string()) + ",";
        out += (row.f ? format_full(*row.f) : std::string()) + ",";
        out += (row.p_value ? format_full(*row.p_value) : std::string()) + ",";
        out += (row.f_critical ? format_full(*row.f_critical) : std::string()) + "\n";
    }
    return out;
}

std::string anova_to_text(const AnovaTable& table) {
    const std::vector<std::string> header = {"Source", "SS",      "df",        "MS",
                                             "F",      "P-Value", "F-Critical"};
    std::vector<std::vector<std::string>> grid;
    grid.push_back(header);
    for (const auto& row : table.rows) {
        grid.push_back({row.source, g6(row.ss), std::to_string(row.df),
                        row.ms ? g6(*row.ms) : "", row.f ? g6(*row.f) : "",
                        row.p_value ? g6(*row.p_value) : "",
                        row.f_critical ? g6(*row.f_critical) : ""});
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& r : grid)
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    std::string out;
    for (const auto& r : grid) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            out += pad_right(r[c], width[c]);
            if (c + 1 < r.size()) out += "  ";
        }
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += "\n";
    }
    return out;
}

bool validate_json_schema(const std::string& document_json, const std::string& schema_json,
                          std::string* error) {
    json doc, schema;
    try {
        doc = json::parse(document_json);
    } catch (const json::parse_error& e) {
        if (error) *error = std::string("document: ") + e.what();
        return false;
    }
    try {
        schema = json::parse(schema_json);
    } catch (const json::parse_error& e) {
        if (error) *error = std::string("schema: ") + e.what();
        return false;
    }
    return schema_check(doc, schema, "#", error);
}

const std::string& report_schema_json() {
    static const std::string schema =
#include "report_schema.inc"
        ;
    return schema;
}

}  // namespace voltacal
