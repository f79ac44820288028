#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "voltacal/errors.hpp"
#include "voltacal/measured.hpp"

namespace voltacal {

enum class SampleSource { synthetic, influent, mixed_liquors, effluent };

struct SampleMeta {
    std::string sample_id;
    double ph = 7.0;
    double dissolved_oxygen = 0.0;              // mg O2/L
    std::optional<double> phosphate_nominal;    // mg P/L, empty when unknown
    std::map<std::string, double> interferents; // ion name -> mg/L
    SampleSource source = SampleSource::synthetic;
};

struct SweepPoint {
    double potential_v = 0.0;
    double current_ua = 0.0;
};

struct Voltammogram {
    std::vector<SweepPoint> points;  // file order, not resorted
    double scan_rate_mv_s = 50.0;
    SampleMeta meta;
};

// Potential window the cathodic peak is searched in. The defaults bracket
// the observed peak range (-0.500 .. -1.10 V) with 0.05 V of margin so the
// DI-blank peak near -1.09 V stays interior.
struct Window {
    double low = -1.15;
    double high = -0.45;
};

struct PeakFeature {
    double peak_potential = 0.0;  // V
    double peak_current = 0.0;    // uA, signed (negative = cathodic)
    Window window;
};

// Mean and n-1 sample standard deviation over replicate peaks; the SD rides
// in the MeasuredQuantity error slot.
struct ReplicateSummary {
    std::size_t n = 0;
    MeasuredQuantity mean_current;    // uA
    MeasuredQuantity mean_potential;  // V
};

// Parses a sweep from CSV text with header `potential_v,current_ua`.
// Throws MalformedRow (with line number) or EmptyFile.
Voltammogram parse_voltammogram(const std::string& csv_text, const SampleMeta& meta);

// Inverse of parse_voltammogram: emits the same CSV dialect with
// shortest-round-trip floats, so parse(serialize(v)) reproduces v exactly.
std::string serialize_voltammogram(const Voltammogram& v);

// Most negative current among samples with potential inside [low, high];
// ties go to the more negative potential. Throws WindowNotCovered if the
// sweep does not span the window, NoInteriorMinimum if the minimum sits on
// a boundary sample (truncated peak).
PeakFeature detect_peak(const Voltammogram& v, const Window& window = Window{});

// Aggregates >= 2 replicate peaks into mean +- sample SD.
ReplicateSummary summarize_replicates(const std::vector<PeakFeature>& peaks);

}  // namespace voltacal
