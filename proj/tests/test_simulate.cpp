#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "voltacal/calib.hpp"
#include "voltacal/cvdata.hpp"
#include "voltacal/simulate.hpp"

using namespace voltacal;

namespace {

SensorModel quiet_model() {
    SensorModel m;
    m.response_slope = -0.28;
    m.response_intercept = -30.0;
    return m;  // zero baseline, zero noise, defaults elsewhere
}

std::vector<CalibrationPoint> synth_points(const SensorModel& m, const std::vector<double>& concs,
                                           std::uint64_t seed0) {
    std::vector<CalibrationPoint> pts;
    std::uint64_t seed = seed0;
    for (double c : concs) {
        PeakFeature p = detect_peak(synth_voltammogram(m, c, seed++));
        pts.push_back({c, {p.peak_current, 0.0}});
    }
    return pts;
}

}  // namespace

TEST_CASE("a quiet blank sweep peaks exactly at the model parameters") {
    SensorModel m = quiet_model();
    Voltammogram v = synth_voltammogram(m, 0.0, 1);

    CHECK(v.points.front().potential_v == -1.4);
    CHECK(v.points.back().potential_v == 1.4);
    // e_zero = -1.09 sits on the 5 mV grid, so no extra sample appears
    CHECK(v.points.size() == 561);
    CHECK(v.meta.source == SampleSource::synthetic);
    CHECK(v.meta.phosphate_nominal.has_value());
    CHECK(*v.meta.phosphate_nominal == 0.0);

    PeakFeature p = detect_peak(v);
    CHECK(p.peak_potential == -1.09);
    CHECK(p.peak_current == -30.0);
}

TEST_CASE("an off-grid apex is sampled exactly where the Nernst shift puts it") {
    SensorModel m = quiet_model();
    const double conc = 10.0;
    const double e_peak = m.e_zero + nernst_slope(m.temperature) * std::log10(conc);

    Voltammogram v = synth_voltammogram(m, conc, 1);
    CHECK(v.points.size() == 562);  // one inserted sample

    PeakFeature p = detect_peak(v);
    CHECK(p.peak_potential == e_peak);
    CHECK(p.peak_current == m.response_intercept + m.response_slope * conc);

    // the inserted sample keeps the sweep sorted
    for (std::size_t i = 1; i < v.points.size(); ++i)
        CHECK(v.points[i - 1].potential_v < v.points[i].potential_v);
}

TEST_CASE("quiet sweeps round-trip the calibration line through the full pipeline") {
    SensorModel m = quiet_model();
    const std::vector<double> concs = {0.0, 0.1, 1.0, 10.0, 25.0, 50.0, 100.0};
    CalibrationCurve c = fit_line(synth_points(m, concs, 7));

    CHECK(c.slope.value == doctest::Approx(m.response_slope).epsilon(1e-12));
    CHECK(c.intercept.value == doctest::Approx(m.response_intercept).epsilon(1e-12));
    CHECK(c.r2 == doctest::Approx(1.0).epsilon(1e-12));

    // and inversion closes the loop
    PeakFeature p = detect_peak(synth_voltammogram(m, 36.0, 3));
    InversionResult inv = invert_concentration(c, {p.peak_current, 0.0});
    CHECK(inv.concentration.value == doctest::Approx(36.0).epsilon(1e-9));
    CHECK(inv.in_range);
}

TEST_CASE("a flat baseline offset shifts the recovered intercept and nothing else") {
    SensorModel m = quiet_model();
    m.baseline_offset = 5.0;
    const std::vector<double> concs = {0.0, 0.1, 1.0, 10.0, 25.0, 50.0, 100.0};
    CalibrationCurve c = fit_line(synth_points(m, concs, 7));
    CHECK(c.slope.value == doctest::Approx(m.response_slope).epsilon(1e-12));
    CHECK(c.intercept.value == doctest::Approx(m.response_intercept + 5.0).epsilon(1e-12));
}

TEST_CASE("a mild baseline tilt moves the apex only slightly") {
    SensorModel m = quiet_model();
    m.baseline_slope = 2.0;
    PeakFeature p = detect_peak(synth_voltammogram(m, 10.0, 1));
    const double e_peak = m.e_zero + nernst_slope(m.temperature) * std::log10(10.0);
    CHECK(std::fabs(p.peak_potential - e_peak) < 0.05);
}

TEST_CASE("quiet peak potentials recover the Nernst slope") {
    SensorModel m = quiet_model();
    std::vector<CalibrationPoint> pts;
    for (double c : {0.1, 1.0, 10.0, 25.0, 50.0, 100.0}) {
        PeakFeature p = detect_peak(synth_voltammogram(m, c, 1));
        pts.push_back({c, {p.peak_potential, 0.0}});
    }
    CalibrationCurve c = fit_nernst(pts);
    CHECK(c.slope.value == doctest::Approx(nernst_slope(m.temperature)).epsilon(1e-9));
    CHECK(c.intercept.value == doctest::Approx(m.e_zero).epsilon(1e-9));

    // a hotter sensor shifts the recovered slope in proportion; the steeper
    // shift pushes the 0.1 mg/L apex past the default window, so start at 1
    SensorModel hot = m;
    hot.temperature = 330.0;
    std::vector<CalibrationPoint> hot_pts;
    for (double conc : {1.0, 10.0, 25.0, 50.0, 100.0}) {
        PeakFeature p = detect_peak(synth_voltammogram(hot, conc, 1));
        hot_pts.push_back({conc, {p.peak_potential, 0.0}});
    }
    CHECK(fit_nernst(hot_pts).slope.value ==
          doctest::Approx(nernst_slope(330.0)).epsilon(1e-9));
}

TEST_CASE("the same seed reproduces a noisy sweep bit for bit") {
    SensorModel m = quiet_model();
    m.noise_sd = 0.8;
    Voltammogram a = synth_voltammogram(m, 25.0, 42);
    Voltammogram b = synth_voltammogram(m, 25.0, 42);
    CHECK(serialize_voltammogram(a) == serialize_voltammogram(b));

    Voltammogram c = synth_voltammogram(m, 25.0, 43);
    CHECK(serialize_voltammogram(a) != serialize_voltammogram(c));

    // with the noise off, the seed is irrelevant
    SensorModel quiet = quiet_model();
    CHECK(serialize_voltammogram(synth_voltammogram(quiet, 25.0, 1)) ==
          serialize_voltammogram(synth_voltammogram(quiet, 25.0, 999)));
}

TEST_CASE("noisy calibrations recover the slope within their own intervals") {
    SensorModel m = quiet_model();
    m.noise_sd = 0.5;
    const std::vector<double> concs = {0.0, 0.1, 1.0, 10.0, 25.0, 50.0, 100.0};
    // noise flattens the apex, so give the minimum search breathing room
    // around the 0.1 mg/L peak that sits 1 mV inside the default window
    const Window window{-1.25, -0.45};

    for (std::uint64_t base : {100u, 200u, 300u, 400u}) {
        // four replicate sweeps per level, averaged like the bench workflow
        std::vector<CalibrationPoint> pts;
        std::uint64_t seed = base;
        for (double c : concs) {
            std::vector<PeakFeature> reps;
            for (int k = 0; k < 4; ++k)
                reps.push_back(detect_peak(synth_voltammogram(m, c, seed++), window));
            ReplicateSummary s = summarize_replicates(reps);
            pts.push_back({c, s.mean_current});
        }
        CalibrationCurve fit = fit_line(pts);
        CHECK(std::fabs(fit.slope.value - m.response_slope) < 3.0 * fit.slope.error);
        // picking the most negative noisy sample biases every level downward
        // by a similar amount, which lands in the intercept, not the slope
        CHECK(fit.intercept.value < m.response_intercept);
        CHECK(fit.intercept.value > m.response_intercept - 6.0 * m.noise_sd);
    }
}

TEST_CASE("synth_voltammogram rejects nonsense parameters") {
    SensorModel m = quiet_model();
    CHECK_THROWS_AS(synth_voltammogram(m, -1.0, 1), std::invalid_argument);
    m.peak_width = 0.0;
    CHECK_THROWS_AS(synth_voltammogram(m, 1.0, 1), std::invalid_argument);
    m = quiet_model();
    m.noise_sd = -0.1;
    CHECK_THROWS_AS(synth_voltammogram(m, 1.0, 1), std::invalid_argument);
    m = quiet_model();
    m.temperature = 0.0;
    CHECK_THROWS_AS(synth_voltammogram(m, 1.0, 1), std::invalid_argument);
}

TEST_CASE("speciation fractions always partition the phosphate") {
    for (double ph = 0.0; ph <= 14.0; ph += 0.25) {
        SpeciationFractions f = phosphate_speciation(ph);
        CHECK(f.h3po4 + f.h2po4 + f.hpo4 + f.po4 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(f.h3po4 >= 0.0);
        CHECK(f.h2po4 >= 0.0);
        CHECK(f.hpo4 >= 0.0);
        CHECK(f.po4 >= 0.0);
    }
}

TEST_CASE("speciation crosses over exactly at the pKa values") {
    SpeciationPkas pk;
    SpeciationFractions at1 = phosphate_speciation(pk.pk1, pk);
    CHECK(at1.h3po4 == doctest::Approx(at1.h2po4).epsilon(1e-12));
    SpeciationFractions at2 = phosphate_speciation(pk.pk2, pk);
    CHECK(at2.h2po4 == doctest::Approx(at2.hpo4).epsilon(1e-12));
    SpeciationFractions at3 = phosphate_speciation(pk.pk3, pk);
    CHECK(at3.hpo4 == doctest::Approx(at3.po4).epsilon(1e-12));

    // custom constants move the crossover with them
    SpeciationPkas alt{3.0, 8.0, 11.0};
    SpeciationFractions at8 = phosphate_speciation(8.0, alt);
    CHECK(at8.h2po4 == doctest::Approx(at8.hpo4).epsilon(1e-12));
}

TEST_CASE("speciation limits and monotonicity match the titration picture") {
    SpeciationFractions acid = phosphate_speciation(0.0);
    CHECK(acid.h3po4 > 0.99);
    SpeciationFractions base = phosphate_speciation(14.0);
    CHECK(base.po4 > 0.97);
    CHECK(base.h3po4 < 1e-10);

    // fully protonated form only ever loses ground as pH rises
    double prev_h3 = 2.0, prev_po4 = -1.0;
    for (double ph = 0.0; ph <= 14.0; ph += 0.5) {
        SpeciationFractions f = phosphate_speciation(ph);
        CHECK(f.h3po4 < prev_h3);
        CHECK(f.po4 > prev_po4);
        prev_h3 = f.h3po4;
        prev_po4 = f.po4;
    }

    // the diprotic ion rises toward its plateau and falls off after it
    for (double ph = 0.5; ph <= 4.0; ph += 0.5)
        CHECK(phosphate_speciation(ph).h2po4 > phosphate_speciation(ph - 0.5).h2po4);
    for (double ph = 6.0; ph <= 13.5; ph += 0.5)
        CHECK(phosphate_speciation(ph).h2po4 < phosphate_speciation(ph - 0.5).h2po4);

    CHECK_THROWS_AS(phosphate_speciation(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(phosphate_speciation(14.1), std::invalid_argument);
}

TEST_CASE("sensor model JSON round-trips field for field") {
    SensorModel m;
    m.response_slope = -0.31;
    m.response_intercept = -28.5;
    m.e_zero = -1.05;
    m.temperature = 293.15;
    m.peak_width = 0.12;
    m.baseline_slope = 1.5;
    m.baseline_offset = -2.25;
    m.noise_sd = 0.4;

    SensorModel back = sensor_model_from_json(sensor_model_to_json(m));
    CHECK(back.response_slope == m.response_slope);
    CHECK(back.response_intercept == m.response_intercept);
    CHECK(back.e_zero == m.e_zero);
    CHECK(back.temperature == m.temperature);
    CHECK(back.peak_width == m.peak_width);
    CHECK(back.baseline_slope == m.baseline_slope);
    CHECK(back.baseline_offset == m.baseline_offset);
    CHECK(back.noise_sd == m.noise_sd);
}

TEST_CASE("sensor model JSON fills gaps with defaults and rejects surprises") {
    SensorModel d = sensor_model_from_json("{}");
    SensorModel ref;
    CHECK(d.e_zero == ref.e_zero);
    CHECK(d.temperature == ref.temperature);
    CHECK(d.peak_width == ref.peak_width);

    SensorModel partial = sensor_model_from_json("{\"response_slope\": -0.2}");
    CHECK(partial.response_slope == -0.2);
    CHECK(partial.e_zero == ref.e_zero);

    CHECK_THROWS_AS(sensor_model_from_json("{\"sloppe\": 1.0}"), std::invalid_argument);
    CHECK_THROWS_AS(sensor_model_from_json("{\"e_zero\": \"deep\"}"), std::invalid_argument);
    CHECK_THROWS_AS(sensor_model_from_json("{\"peak_width\": 0.0}"), std::invalid_argument);
    CHECK_THROWS_AS(sensor_model_from_json("{\"noise_sd\": -1.0}"), std::invalid_argument);
    CHECK_THROWS_AS(sensor_model_from_json("{\"temperature\": -5}"), std::invalid_argument);
    CHECK_THROWS_AS(sensor_model_from_json("not json"), std::invalid_argument);
}
