#pragma once

#include <cstdint>
#include <string>

#include "voltacal/cvdata.hpp"

namespace voltacal {

// Parametric sensor response: a Gaussian cathodic peak on a linear baseline.
// The amplitude follows the calibration line and the peak center follows the
// Nernst shift; nothing fancier, the shape only has to have a well-defined
// extremum for the pipeline to chew on.
struct SensorModel {
    double response_slope = 0.0;      // uA per (mg P/L), negative for cathodic response
    double response_intercept = 0.0;  // uA, blank peak amplitude
    double e_zero = -1.09;            // V, blank peak potential
    double temperature = 298.15;      // K
    double peak_width = 0.15;         // V, Gaussian sigma
    double baseline_slope = 0.0;      // uA/V
    double baseline_offset = 0.0;     // uA
    double noise_sd = 0.0;            // uA, additive white Gaussian on current
};

struct SpeciationPkas {
    double pk1 = 2.15;
    double pk2 = 7.20;
    double pk3 = 12.35;
};

struct SpeciationFractions {
    double h3po4 = 0.0;
    double h2po4 = 0.0;
    double hpo4 = 0.0;
    double po4 = 0.0;
};

// Synthesizes one sweep from -1.4 to 1.4 V in 5 mV steps. When the peak
// center falls between grid points one extra sample is inserted exactly at
// the apex, so zero-noise sweeps hand the detector the analytic peak and
// round-trip properties hold to full precision. Noise is drawn from an
// explicitly specified generator (mt19937_64 + Box-Muller), so a seed pins
// the output bit-for-bit on any platform.
Voltammogram synth_voltammogram(const SensorModel& model, double conc, std::uint64_t seed);

// Closed-form triprotic speciation. The pKa defaults are standard textbook
// constants, deliberately configurable and not tied to any fitted result.
SpeciationFractions phosphate_speciation(double ph, const SpeciationPkas& pkas = SpeciationPkas{});

// JSON scenario config mirroring the SensorModel fields one to one. Absent
// fields keep their defaults; unknown fields are rejected.
SensorModel sensor_model_from_json(const std::string& json_text);
std::string sensor_model_to_json(const SensorModel& model);

}  // namespace voltacal
