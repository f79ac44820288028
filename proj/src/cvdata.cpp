#include "voltacal/cvdata.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "voltacal/textio.hpp"

namespace voltacal {

Voltammogram parse_voltammogram(const std::string& csv_text, const SampleMeta& meta) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line))
        throw EmptyFile("voltammogram CSV is empty");
    {
        auto header = split_csv(line);
        if (header.size() != 2 || header[0] != "potential_v" || header[1] != "current_ua")
            throw MalformedRow("line 1: expected header potential_v,current_ua");
    }

    Voltammogram v;
    v.meta = meta;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv(line);
        if (cells.size() != 2)
            throw MalformedRow("line " + std::to_string(lineno) + ": expected 2 columns, got " +
                               std::to_string(cells.size()));
        auto p = parse_double(cells[0]);
        auto c = parse_double(cells[1]);
        if (!p || !c)
            throw MalformedRow("line " + std::to_string(lineno) + ": non-numeric cell");
        if (!std::isfinite(*p) || !std::isfinite(*c))
            throw MalformedRow("line " + std::to_string(lineno) + ": non-finite value");
        v.points.push_back({*p, *c});
    }
    if (v.points.size() < 2)
        throw EmptyFile("voltammogram CSV has " + std::to_string(v.points.size()) +
                        " data rows, need at least 2");
    return v;
}

std::string serialize_voltammogram(const Voltammogram& v) {
    std::string out = "potential_v,current_ua\n";
    for (const auto& pt : v.points) {
        out += format_full(pt.potential_v);
        out += ',';
        out += format_full(pt.current_ua);
        out += '\n';
    }
    return out;
}

PeakFeature detect_peak(const Voltammogram& v, const Window& window) {
    if (!(window.low < window.high))
        throw WindowNotCovered("window low must be below window high");
    if (v.points.empty())
        throw WindowNotCovered("sweep has no points");

    double pmin = v.points.front().potential_v;
    double pmax = pmin;
    for (const auto& pt : v.points) {
        pmin = std::min(pmin, pt.potential_v);
        pmax = std::max(pmax, pt.potential_v);
    }
    if (pmin > window.low || pmax < window.high)
        throw WindowNotCovered("sweep [" + format_full(pmin) + ", " + format_full(pmax) +
                               "] does not span window [" + format_full(window.low) + ", " +
                               format_full(window.high) + "]");

    const SweepPoint* best = nullptr;
    for (const auto& pt : v.points) {
        if (pt.potential_v < window.low || pt.potential_v > window.high) continue;
        if (!best || pt.current_ua < best->current_ua ||
            (pt.current_ua == best->current_ua && pt.potential_v < best->potential_v))
            best = &pt;
    }
    if (!best)
        throw WindowNotCovered("no samples inside the analysis window");
    if (best->potential_v == window.low || best->potential_v == window.high)
        throw NoInteriorMinimum("minimum current sits on the window boundary at " +
                                format_full(best->potential_v) + " V (truncated peak)");

    return PeakFeature{best->potential_v, best->current_ua, window};
}

namespace {

MeasuredQuantity mean_and_sd(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

ReplicateSummary summarize_replicates(const std::vector<PeakFeature>& peaks) {
    if (peaks.size() < 2)
        throw TooFewReplicates("need at least 2 replicates for a sample SD, got " +
                               std::to_string(peaks.size()));
    std::vector<double> currents, potentials;
    currents.reserve(peaks.size());
    potentials.reserve(peaks.size());
    for (const auto& p : peaks) {
        currents.push_back(p.peak_current);
        potentials.push_back(p.peak_potential);
    }
    ReplicateSummary s;
    s.n = peaks.size();
    s.mean_current = mean_and_sd(currents);
    s.mean_potential = mean_and_sd(potentials);
    return s;
}

}  // namespace voltacal
