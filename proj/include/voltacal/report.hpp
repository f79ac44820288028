#pragma once

#include <optional>
#include <string>
#include <vector>

#include "voltacal/calib.hpp"
#include "voltacal/inferstat.hpp"
#include "voltacal/measured.hpp"

namespace voltacal {

inline constexpr const char* kToolVersion = "voltacal 0.1.0";

enum class Study { ph_effect, interference, dissolved_oxygen, wastewater, custom };

std::string study_name(Study study);
std::optional<Study> study_from_name(const std::string& name);

struct NamedCurve {
    std::string name;
    CalibrationCurve curve;
    // coefficient +- CI quoted at the rounding a lab report would use
    std::string printed_slope;
    std::string printed_intercept;
};

struct NamedLod {
    std::string name;
    LodResult lod;
    std::string printed;  // e.g. "(6 ± 8) mg P/L"
};

struct NamedAnova {
    std::string name;
    AnovaTable table;
    bool duplicated_replicates = false;
};

struct NamedTTest {
    std::string name;
    TTestResult test;
};

struct InversionRecord {
    std::string sample_id;
    MeasuredQuantity concentration;  // mg P/L, full precision
    bool in_range = true;
    std::string printed;  // interval when in range, "Out of Range" otherwise
};

struct Provenance {
    std::vector<std::string> inputs;  // table ids / files the run consumed
    std::string tool_version = kToolVersion;
};

struct AnalysisReport {
    Study study = Study::custom;
    std::vector<NamedCurve> curves;
    std::vector<NamedLod> lods;
    std::vector<NamedAnova> anova;
    std::vector<InversionRecord> inversions;
    std::vector<NamedTTest> ttests;
    Provenance provenance;
    // RFC 3339 stamp, kept in one field so the rest of the report is
    // byte-identical across reruns
    std::string generated_at;
};

// "(V +- E) unit" with value and error rounded to whole numbers.
std::string printed_interval(const MeasuredQuantity& mq, const std::string& unit);

// "V +- E" with E at one significant figure and V at E's decimal place.
std::string printed_coefficient(double value, double ci);

// JSON document, 2-space indent, keys in declaration order.
std::string report_to_json(const AnalysisReport& report);

// Source,SS,df,MS,F,P-Value,F-Critical rows; blank cells for absent values.
std::string anova_to_csv(const AnovaTable& table);

// Aligned rendering of the same columns for terminals.
std::string anova_to_text(const AnovaTable& table);

// Checks a document against a schema supporting the draft-07 subset the
// shipped report schema uses: type, properties, required, items, enum and
// boolean additionalProperties.
bool validate_json_schema(const std::string& document_json, const std::string& schema_json,
                          std::string* error = nullptr);

// Canonical schema text; the copy under docs/ must match byte for byte.
const std::string& report_schema_json();

}  // namespace voltacal
