#include "voltacal/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "voltacal/calib.hpp"
#include "voltacal/textio.hpp"

namespace voltacal {

namespace {

constexpr int kSweepSteps = 560;  // -1.4 .. 1.4 V at 5 mV

double grid_potential(int i) {
    return (5 * i - 1400) / 1000.0;
}

// Uniform in (0, 1] and standard normal from explicit formulas; the C++
// standard pins mt19937_64 exactly but leaves normal_distribution's
// algorithm to the vendor, which would break cross-platform fixtures.
class NormalDraw {
public:
    explicit NormalDraw(std::uint64_t seed) : rng_(seed) {}

    double operator()() {
        const double u1 = ((rng_() >> 11) + 1) * 0x1.0p-53;  // never zero
        const double u2 = (rng_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace

Voltammogram synth_voltammogram(const SensorModel& model, double conc, std::uint64_t seed) {
    if (!(model.peak_width > 0.0)) throw std::invalid_argument("peak_width must be positive");
    if (model.noise_sd < 0.0) throw std::invalid_argument("noise_sd must be nonnegative");
    if (!(model.temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    if (conc < 0.0) throw std::invalid_argument("concentration must be nonnegative");

    const double e_peak =
        conc > 0.0 ? model.e_zero + nernst_slope(model.temperature) * std::log10(conc)
                   : model.e_zero;
    const double amplitude = model.response_intercept + model.response_slope * conc;

    std::vector<double> potentials;
    potentials.reserve(kSweepSteps + 2);
    for (int i = 0; i <= kSweepSteps; ++i) potentials.push_back(grid_potential(i));
    if (e_peak > potentials.front() && e_peak < potentials.back()) {
        auto pos = std::lower_bound(potentials.begin(), potentials.end(), e_peak);
        if (*pos != e_peak) potentials.insert(pos, e_peak);
    }

    NormalDraw noise(seed);
    Voltammogram v;
    v.scan_rate_mv_s = 50.0;
    v.meta.sample_id = "synthetic";
    v.meta.source = SampleSource::synthetic;
    v.meta.phosphate_nominal = conc;
    v.points.reserve(potentials.size());
    for (double e : potentials) {
        const double d = e - e_peak;
        double current = model.baseline_offset + model.baseline_slope * e +
                         amplitude * std::exp(-d * d / (2.0 * model.peak_width * model.peak_width));
        if (model.noise_sd > 0.0) current += model.noise_sd * noise();
        v.points.push_back({e, current});
    }
    return v;
}

SpeciationFractions phosphate_speciation(double ph, const SpeciationPkas& pkas) {
    if (ph < 0.0 || ph > 14.0) throw std::invalid_argument("pH must be in [0, 14]");
    const double h = std::pow(10.0, -ph);
    const double k1 = std::pow(10.0, -pkas.pk1);
    const double k2 = std::pow(10.0, -pkas.pk2);
    const double k3 = std::pow(10.0, -pkas.pk3);

    const double t0 = h * h * h;
    const double t1 = h * h * k1;
    const double t2 = h * k1 * k2;
    const double t3 = k1 * k2 * k3;
    const double total = t0 + t1 + t2 + t3;

    SpeciationFractions f;
    f.h3po4 = t0 / total;
    f.h2po4 = t1 / total;
    f.hpo4 = t2 / total;
    f.po4 = t3 / total;
    return f;
}

SensorModel sensor_model_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("sensor model config: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("sensor model config must be an object");

    SensorModel m;
    const std::vector<std::pair<const char*, double*>> fields = {
        {"response_slope", &m.response_slope}, {"response_intercept", &m.response_intercept},
        {"e_zero", &m.e_zero},                 {"temperature", &m.temperature},
        {"peak_width", &m.peak_width},         {"baseline_slope", &m.baseline_slope},
        {"baseline_offset", &m.baseline_offset}, {"noise_sd", &m.noise_sd}};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const auto& [name, slot] : fields)
            if (it.key() == name) {
                if (!it.value().is_number())
                    throw std::invalid_argument(std::string("sensor model config: ") + name +
                                                " must be a number");
                *slot = it.value().get<double>();
                known = true;
                break;
            }
        if (!known)
            throw std::invalid_argument("sensor model config: unknown field " + it.key());
    }
    if (!(m.peak_width > 0.0)) throw std::invalid_argument("peak_width must be positive");
    if (m.noise_sd < 0.0) throw std::invalid_argument("noise_sd must be nonnegative");
    if (!(m.temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    return m;
}

std::string sensor_model_to_json(const SensorModel& model) {
    nlohmann::ordered_json j;
    j["response_slope"] = model.response_slope;
    j["response_intercept"] = model.response_intercept;
    j["e_zero"] = model.e_zero;
    j["temperature"] = model.temperature;
    j["peak_width"] = model.peak_width;
    j["baseline_slope"] = model.baseline_slope;
    j["baseline_offset"] = model.baseline_offset;
    j["noise_sd"] = model.noise_sd;
    return j.dump(2) + "\n";
}

}  // namespace voltacal
