#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "voltacal/cvdata.hpp"
#include "voltacal/datasets.hpp"
#include "voltacal/textio.hpp"

using namespace voltacal;

namespace {

// Independent mean / sample-SD, written from the textbook formulas so the
// library's aggregation is checked against arithmetic and not against itself.
double oracle_mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double oracle_sd(const std::vector<double>& xs) {
    const double m = oracle_mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

Voltammogram make_sweep(const std::vector<SweepPoint>& pts) {
    Voltammogram v;
    v.points = pts;
    v.meta.sample_id = "unit";
    return v;
}

}  // namespace

TEST_CASE("parse accepts the documented dialect and keeps file order") {
    const std::string csv =
        "potential_v,current_ua\n"
        "0.5,-3.25\n"
        "-0.5,-7\n"
        "\n"
        "0,1e-3\r\n";
    SampleMeta meta;
    meta.sample_id = "s1";
    meta.ph = 8.0;
    Voltammogram v = parse_voltammogram(csv, meta);
    REQUIRE(v.points.size() == 3);
    // rows come back in file order, no sorting
    CHECK(v.points[0].potential_v == 0.5);
    CHECK(v.points[0].current_ua == -3.25);
    CHECK(v.points[1].potential_v == -0.5);
    CHECK(v.points[2].current_ua == 1e-3);
    CHECK(v.meta.sample_id == "s1");
    CHECK(v.meta.ph == 8.0);
}

TEST_CASE("parse rejects broken input with the right error types") {
    SampleMeta meta;
    CHECK_THROWS_AS(parse_voltammogram("", meta), EmptyFile);
    CHECK_THROWS_AS(parse_voltammogram("volts,amps\n0,0\n1,1\n", meta), MalformedRow);
    CHECK_THROWS_AS(parse_voltammogram("potential_v,current_ua\n0.1\n", meta), MalformedRow);
    CHECK_THROWS_AS(parse_voltammogram("potential_v,current_ua\n0.1,2,3\n", meta), MalformedRow);
    CHECK_THROWS_AS(parse_voltammogram("potential_v,current_ua\n0.1,abc\n", meta), MalformedRow);
    CHECK_THROWS_AS(parse_voltammogram("potential_v,current_ua\n0.1,1.5x\n", meta), MalformedRow);
    CHECK_THROWS_AS(parse_voltammogram("potential_v,current_ua\n0.1,inf\n", meta), MalformedRow);
    // a single data row is not a sweep
    CHECK_THROWS_AS(parse_voltammogram("potential_v,current_ua\n0.1,1.5\n", meta), EmptyFile);

    // the complaint names the offending line
    try {
        parse_voltammogram("potential_v,current_ua\n0,0\n0.1,oops\n", meta);
        FAIL("expected MalformedRow");
    } catch (const MalformedRow& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("serialize then parse reproduces every sample bit for bit") {
    // awkward doubles on purpose: non-terminating binary fractions, tiny
    // magnitudes, negative zero
    Voltammogram v = make_sweep({
        {0.1 + 0.2, -1.0 / 3.0},
        {-1.4, 2.2250738585072014e-308},
        {1e17, -0.0},
        {0.3333333333333333, 29.674999999999997},
    });
    v.meta.ph = 4.0;
    Voltammogram back = parse_voltammogram(serialize_voltammogram(v), v.meta);
    REQUIRE(back.points.size() == v.points.size());
    for (std::size_t i = 0; i < v.points.size(); ++i) {
        CHECK(back.points[i].potential_v == v.points[i].potential_v);
        CHECK(back.points[i].current_ua == v.points[i].current_ua);
    }
}

TEST_CASE("a bundled sweep file round-trips through serialize") {
    const std::string path = data_dir() + "/voltammograms/di_blank_ph8_r1.csv";
    SampleMeta meta;
    Voltammogram v = parse_voltammogram(read_text_file(path), meta);
    Voltammogram back = parse_voltammogram(serialize_voltammogram(v), meta);
    REQUIRE(back.points.size() == v.points.size());
    for (std::size_t i = 0; i < v.points.size(); ++i) {
        CHECK(back.points[i].potential_v == v.points[i].potential_v);
        CHECK(back.points[i].current_ua == v.points[i].current_ua);
    }
}

TEST_CASE("detect_peak finds the most negative in-window current") {
    Voltammogram v = make_sweep({
        {-1.4, -5.0}, {-1.2, -6.0}, {-1.0, -9.5}, {-0.8, -7.0}, {-0.6, -4.0}, {0.0, 1.0},
    });
    PeakFeature p = detect_peak(v);
    CHECK(p.peak_potential == -1.0);
    CHECK(p.peak_current == -9.5);
    CHECK(p.window.low == -1.15);
    CHECK(p.window.high == -0.45);
}

TEST_CASE("detect_peak breaks current ties toward the more negative potential") {
    Voltammogram v = make_sweep({
        {-1.4, -1.0}, {-1.1, -9.5}, {-0.9, -9.5}, {-0.7, -2.0}, {0.0, 0.0},
    });
    PeakFeature p = detect_peak(v);
    CHECK(p.peak_potential == -1.1);
    CHECK(p.peak_current == -9.5);

    // same data, reversed file order: the tie still resolves the same way
    Voltammogram r = make_sweep({
        {0.0, 0.0}, {-0.7, -2.0}, {-0.9, -9.5}, {-1.1, -9.5}, {-1.4, -1.0},
    });
    CHECK(detect_peak(r).peak_potential == -1.1);
}

TEST_CASE("detect_peak refuses sweeps that do not span the window") {
    // stops short of the cathodic end
    Voltammogram narrow = make_sweep({{-1.0, -1.0}, {-0.5, -2.0}, {0.0, 0.0}});
    CHECK_THROWS_AS(detect_peak(narrow), WindowNotCovered);

    // spans a custom window but holds no samples inside it
    Voltammogram sparse = make_sweep({{-1.4, -1.0}, {0.0, 0.0}});
    CHECK_THROWS_AS(detect_peak(sparse, Window{-1.0, -0.5}), WindowNotCovered);

    // inverted window is a caller bug, reported the same way
    CHECK_THROWS_AS(detect_peak(narrow, Window{-0.5, -1.0}), WindowNotCovered);
}

TEST_CASE("detect_peak flags a minimum pinned to the window edge") {
    // most negative current exactly at window.low: truncated peak
    Voltammogram at_low = make_sweep({
        {-1.4, -1.0}, {-1.15, -9.0}, {-0.8, -3.0}, {0.0, 0.0},
    });
    CHECK_THROWS_AS(detect_peak(at_low), NoInteriorMinimum);

    // and at window.high
    Voltammogram at_high = make_sweep({
        {-1.4, -1.0}, {-0.8, -3.0}, {-0.45, -9.0}, {0.0, 0.0},
    });
    CHECK_THROWS_AS(detect_peak(at_high), NoInteriorMinimum);

    // one grid step inside the edge is fine
    Voltammogram interior = make_sweep({
        {-1.4, -1.0}, {-1.145, -9.0}, {-0.8, -3.0}, {0.0, 0.0},
    });
    CHECK(detect_peak(interior).peak_potential == -1.145);
}

TEST_CASE("summarize_replicates matches direct mean and sample SD") {
    std::vector<PeakFeature> peaks = {
        {-0.86, -20.1, Window{}},
        {-0.88, -21.4, Window{}},
        {-0.87, -20.9, Window{}},
        {-0.85, -22.2, Window{}},
    };
    std::vector<double> currents = {-20.1, -21.4, -20.9, -22.2};
    std::vector<double> potentials = {-0.86, -0.88, -0.87, -0.85};

    ReplicateSummary s = summarize_replicates(peaks);
    CHECK(s.n == 4);
    CHECK(s.mean_current.value == doctest::Approx(oracle_mean(currents)).epsilon(1e-15));
    CHECK(s.mean_current.error == doctest::Approx(oracle_sd(currents)).epsilon(1e-15));
    CHECK(s.mean_potential.value == doctest::Approx(oracle_mean(potentials)).epsilon(1e-15));
    CHECK(s.mean_potential.error == doctest::Approx(oracle_sd(potentials)).epsilon(1e-15));

    CHECK_THROWS_AS(summarize_replicates({peaks[0]}), TooFewReplicates);
    CHECK_THROWS_AS(summarize_replicates({}), TooFewReplicates);
}

TEST_CASE("bundled DI blank sweeps reproduce the tabulated blank condition") {
    auto entries = load_sweep_manifest();
    REQUIRE(entries.size() == 4);

    std::vector<PeakFeature> peaks;
    std::vector<double> currents, potentials;
    for (const auto& e : entries) {
        Voltammogram v = load_sweep(e);
        CHECK(v.meta.ph == 8.0);
        CHECK(v.meta.source == SampleSource::synthetic);
        PeakFeature p = detect_peak(v);
        peaks.push_back(p);
        currents.push_back(p.peak_current);
        potentials.push_back(p.peak_potential);
    }

    // replicate 1 lands on known grid values
    CHECK(peaks[0].peak_potential == -1.07);
    CHECK(peaks[0].peak_current == -29.2);

    ReplicateSummary s = summarize_replicates(peaks);
    CHECK(s.mean_current.value == doctest::Approx(oracle_mean(currents)).epsilon(1e-15));
    CHECK(s.mean_current.error == doctest::Approx(oracle_sd(currents)).epsilon(1e-15));

    // the sweeps were generated to match the tabulated pH 8 blank row
    CHECK(s.mean_current.value == doctest::Approx(-29.675).epsilon(1e-12));
    CHECK(s.mean_potential.value == doctest::Approx(-1.09).epsilon(1e-12));
}
