#include "voltacal/datasets.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "voltacal/textio.hpp"

namespace voltacal {

namespace {

using nlohmann::json;

TableSchema schema_from_string(const std::string& s) {
    if (s == "replicate_matrix") return TableSchema::replicate_matrix;
    if (s == "averaged_summary") return TableSchema::averaged_summary;
    if (s == "characterization") return TableSchema::characterization;
    throw MalformedRow("unknown fixture schema: " + s);
}

void parse_replicate_matrix(TableFixture& fx, const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    if (split_csv(line) != std::vector<std::string>{"factor_a", "conc_mg_p_l", "replicate",
                                                    "current_ua"})
        throw MalformedRow(fx.table_id + ": unexpected replicate_matrix header");

    struct Obs {
        std::string level;
        double conc;
        std::size_t rep;
        double current;
    };
    std::vector<Obs> obs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 4)
            throw MalformedRow(fx.table_id + " line " + std::to_string(lineno) +
                               ": expected 4 columns");
        auto conc = parse_double(cells[1]);
        auto rep = parse_double(cells[2]);
        auto cur = parse_double(cells[3]);
        if (!conc || !rep || !cur)
            throw MalformedRow(fx.table_id + " line " + std::to_string(lineno) +
                               ": non-numeric cell");
        obs.push_back({cells[0], *conc, static_cast<std::size_t>(*rep), *cur});
    }
    if (obs.empty()) throw EmptyFile(fx.table_id + ": no observations");

    for (const auto& o : obs) {
        if (std::find(fx.factor_levels.begin(), fx.factor_levels.end(), o.level) ==
            fx.factor_levels.end())
            fx.factor_levels.push_back(o.level);
        if (std::find(fx.concentrations.begin(), fx.concentrations.end(), o.conc) ==
            fx.concentrations.end())
            fx.concentrations.push_back(o.conc);
        fx.replicates = std::max(fx.replicates, o.rep);
    }

    const std::size_t a = fx.factor_levels.size();
    const std::size_t b = fx.concentrations.size();
    const std::size_t r = fx.replicates;
    if (obs.size() != a * b * r)
        throw MalformedRow(fx.table_id + ": grid is not rectangular (" +
                           std::to_string(obs.size()) + " observations for " +
                           std::to_string(a * b * r) + " cells)");

    fx.currents.assign(a * b * r, 0.0);
    std::vector<bool> seen(a * b * r, false);
    for (const auto& o : obs) {
        const auto i = static_cast<std::size_t>(
            std::find(fx.factor_levels.begin(), fx.factor_levels.end(), o.level) -
            fx.factor_levels.begin());
        const auto j = static_cast<std::size_t>(
            std::find(fx.concentrations.begin(), fx.concentrations.end(), o.conc) -
            fx.concentrations.begin());
        if (o.rep < 1 || o.rep > r)
            throw MalformedRow(fx.table_id + ": replicate index out of range");
        const std::size_t idx = (i * b + j) * r + (o.rep - 1);
        if (seen[idx]) throw MalformedRow(fx.table_id + ": duplicate grid cell");
        seen[idx] = true;
        fx.currents[idx] = o.current;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw MalformedRow(fx.table_id + ": grid has holes");
}

void parse_averaged_summary(TableFixture& fx, const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    if (split_csv(line) != std::vector<std::string>{"conc_mg_p_l", "avg_current_ua",
                                                    "sd_current_ua", "avg_potential_v",
                                                    "sd_potential_v"})
        throw MalformedRow(fx.table_id + ": unexpected averaged_summary header");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 5)
            throw MalformedRow(fx.table_id + " line " + std::to_string(lineno) +
                               ": expected 5 columns");
        std::array<double, 5> v{};
        for (std::size_t k = 0; k < 5; ++k) {
            auto x = parse_double(cells[k]);
            if (!x)
                throw MalformedRow(fx.table_id + " line " + std::to_string(lineno) +
                                   ": non-numeric cell");
            v[k] = *x;
        }
        fx.averaged.push_back({v[0], {v[1], v[2]}, {v[3], v[4]}});
    }
    if (fx.averaged.empty()) throw EmptyFile(fx.table_id + ": no rows");
}

void parse_characterization(TableFixture& fx, const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    if (split_csv(line) != std::vector<std::string>{"component", "influent", "mixed_liquors",
                                                    "effluent", "units"})
        throw MalformedRow(fx.table_id + ": unexpected characterization header");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 5)
            throw MalformedRow(fx.table_id + " line " + std::to_string(lineno) +
                               ": expected 5 columns");
        fx.characterization.push_back({cells[0], cells[1], cells[2], cells[3], cells[4]});
    }
    if (fx.characterization.empty()) throw EmptyFile(fx.table_id + ": no rows");
}

}  // namespace

std::optional<double> CharacterizationRow::numeric(const std::string& column) const {
    const std::string* cell = nullptr;
    if (column == "influent")
        cell = &influent;
    else if (column == "mixed_liquors")
        cell = &mixed_liquors;
    else if (column == "effluent")
        cell = &effluent;
    else
        throw std::invalid_argument("no characterization column named " + column);
    return parse_double(*cell);
}

double TableFixture::current_at(std::size_t level, std::size_t conc_idx, std::size_t rep) const {
    return currents[(level * concentrations.size() + conc_idx) * replicates + rep];
}

std::size_t TableFixture::level_index(const std::string& level) const {
    auto it = std::find(factor_levels.begin(), factor_levels.end(), level);
    if (it == factor_levels.end())
        throw std::invalid_argument(table_id + " has no factor level " + level);
    return static_cast<std::size_t>(it - factor_levels.begin());
}

FactorialData TableFixture::to_factorial() const {
    if (schema != TableSchema::replicate_matrix)
        throw std::invalid_argument(table_id + " is not a replicate matrix");
    FactorialData data(factor_levels.size(), concentrations.size(), replicates, currents);
    data.duplicated = duplicated_from_replicates > 0;
    return data;
}

std::vector<double> TableFixture::block(const std::string& level) const {
    const std::size_t i = level_index(level);
    std::vector<double> out;
    out.reserve(concentrations.size() * replicates);
    for (std::size_t j = 0; j < concentrations.size(); ++j)
        for (std::size_t k = 0; k < replicates; ++k) out.push_back(current_at(i, j, k));
    return out;
}

ReplicateSummary TableFixture::condition_summary(const std::string& level,
                                                 std::size_t conc_idx) const {
    const std::size_t i = level_index(level);
    std::vector<PeakFeature> peaks;
    for (std::size_t k = 0; k < replicates; ++k)
        peaks.push_back({0.0, current_at(i, conc_idx, k), Window{}});
    return summarize_replicates(peaks);
}

namespace {

std::vector<CalibrationPoint> mean_points(const TableFixture& fx, const std::string& level,
                                          std::size_t use_r) {
    const std::size_t i = fx.level_index(level);
    std::vector<CalibrationPoint> points;
    for (std::size_t j = 0; j < fx.concentrations.size(); ++j) {
        std::vector<PeakFeature> peaks;
        for (std::size_t k = 0; k < use_r; ++k)
            peaks.push_back({0.0, fx.current_at(i, j, k), Window{}});
        const ReplicateSummary s = summarize_replicates(peaks);
        points.push_back({fx.concentrations[j], s.mean_current});
    }
    return points;
}

}  // namespace

std::vector<CalibrationPoint> TableFixture::replicate_mean_points(const std::string& level) const {
    return mean_points(*this, level, replicates);
}

std::vector<CalibrationPoint> TableFixture::unique_replicate_mean_points(
    const std::string& level) const {
    const std::size_t r = duplicated_from_replicates > 0 ? duplicated_from_replicates : replicates;
    return mean_points(*this, level, r);
}

std::vector<CalibrationPoint> TableFixture::current_points() const {
    if (schema != TableSchema::averaged_summary)
        throw std::invalid_argument(table_id + " is not an averaged summary");
    std::vector<CalibrationPoint> pts;
    for (const auto& row : averaged) pts.push_back({row.conc, row.current});
    return pts;
}

std::vector<CalibrationPoint> TableFixture::potential_points() const {
    if (schema != TableSchema::averaged_summary)
        throw std::invalid_argument(table_id + " is not an averaged summary");
    std::vector<CalibrationPoint> pts;
    for (const auto& row : averaged) pts.push_back({row.conc, row.potential});
    return pts;
}

const CharacterizationRow& TableFixture::component(const std::string& name) const {
    for (const auto& row : characterization)
        if (row.component == name) return row;
    throw std::invalid_argument(table_id + " has no component row " + name);
}

std::string data_dir() {
    if (const char* env = std::getenv("VOLTACAL_DATA_DIR")) return env;
#ifdef VOLTACAL_DEFAULT_DATA_DIR
    return VOLTACAL_DEFAULT_DATA_DIR;
#else
    return "data";
#endif
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

TableFixture load_table(const std::string& table_id) {
    const std::string base = data_dir() + "/tables/" + table_id;
    if (!std::filesystem::exists(base + ".json"))
        throw UnknownTable("no bundled table named " + table_id);

    json manifest;
    try {
        manifest = json::parse(read_text_file(base + ".json"));
    } catch (const json::parse_error& e) {
        throw MalformedRow(table_id + " manifest: " + e.what());
    }

    TableFixture fx;
    fx.table_id = manifest.at("table_id").get<std::string>();
    if (fx.table_id != table_id)
        throw MalformedRow("manifest table_id " + fx.table_id + " does not match " + table_id);
    fx.schema = schema_from_string(manifest.at("schema").get<std::string>());
    fx.provenance = manifest.at("provenance").get<std::string>();
    fx.checksum = std::strtoull(manifest.at("checksum_fnv1a64").get<std::string>().c_str(),
                                nullptr, 16);
    if (manifest.contains("notes"))
        for (const auto& n : manifest["notes"]) fx.notes.push_back(n.get<std::string>());
    if (manifest.contains("anomalies"))
        for (const auto& a : manifest["anomalies"])
            fx.anomalies.push_back(a.at("cell").get<std::string>() + ": " +
                                   a.at("note").get<std::string>() + " (printed " +
                                   a.at("printed").get<std::string>() + ", recomputed " +
                                   a.at("recomputed").get<std::string>() + ")");
    if (manifest.contains("duplicated_from_replicates"))
        fx.duplicated_from_replicates = manifest["duplicated_from_replicates"].get<std::size_t>();
    if (manifest.contains("aggregated_from")) {
        fx.aggregated_from_table = manifest["aggregated_from"].at("table_id").get<std::string>();
        fx.aggregated_from_level =
            manifest["aggregated_from"].at("factor_a_level").get<std::string>();
    }
    if (manifest.contains("rows_omitted"))
        for (const auto& rstr : manifest["rows_omitted"]) {
            auto v = parse_double(rstr.get<std::string>());
            if (!v) throw MalformedRow(table_id + " manifest: non-numeric rows_omitted entry");
            fx.rows_omitted.push_back(*v);
        }

    const std::string csv = read_text_file(base + ".csv");
    const std::uint64_t actual = fnv1a64(csv.data(), csv.size());
    if (actual != fx.checksum) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "0x%016llx",
                      static_cast<unsigned long long>(actual));
        throw ChecksumMismatch(table_id + ".csv hashes to " + buf +
                               ", manifest expects " +
                               manifest.at("checksum_fnv1a64").get<std::string>());
    }

    switch (fx.schema) {
        case TableSchema::replicate_matrix: parse_replicate_matrix(fx, csv); break;
        case TableSchema::averaged_summary: parse_averaged_summary(fx, csv); break;
        case TableSchema::characterization: parse_characterization(fx, csv); break;
    }

    if (fx.schema == TableSchema::replicate_matrix) {
        if (manifest.contains("factor_a_name"))
            fx.factor_a_name = manifest["factor_a_name"].get<std::string>();
        if (manifest.contains("factor_a_levels")) {
            std::vector<std::string> expected;
            for (const auto& l : manifest["factor_a_levels"])
                expected.push_back(l.get<std::string>());
            if (expected != fx.factor_levels)
                throw MalformedRow(table_id + ": factor levels in CSV do not match manifest");
        }
        if (manifest.contains("replicates") &&
            manifest["replicates"].get<std::size_t>() != fx.replicates)
            throw MalformedRow(table_id + ": replicate count in CSV does not match manifest");
    }
    return fx;
}

std::vector<SweepManifestEntry> load_sweep_manifest() {
    const std::string path = data_dir() + "/voltammograms/manifest.csv";
    std::istringstream in(read_text_file(path));
    std::string line;
    std::getline(in, line);
    if (split_csv(line) !=
        std::vector<std::string>{"sample_id", "replicate", "ph", "do_mg_l", "p_mg_l", "cl_mg_l",
                                 "so4_mg_l", "no3_mg_l", "source", "file"})
        throw MalformedRow("sweep manifest: unexpected header");

    std::vector<SweepManifestEntry> entries;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 10)
            throw MalformedRow("sweep manifest line " + std::to_string(lineno) +
                               ": expected 10 columns");
        SweepManifestEntry e;
        e.meta.sample_id = cells[0];
        auto rep = parse_double(cells[1]);
        auto ph = parse_double(cells[2]);
        auto dox = parse_double(cells[3]);
        auto p = parse_double(cells[4]);
        auto cl = parse_double(cells[5]);
        auto so4 = parse_double(cells[6]);
        auto no3 = parse_double(cells[7]);
        if (!rep || !ph || !dox || !p || !cl || !so4 || !no3)
            throw MalformedRow("sweep manifest line " + std::to_string(lineno) +
                               ": non-numeric cell");
        e.replicate = static_cast<std::size_t>(*rep);
        e.meta.ph = *ph;
        e.meta.dissolved_oxygen = *dox;
        e.meta.phosphate_nominal = *p;
        e.meta.interferents = {{"Cl-", *cl}, {"SO42-", *so4}, {"NO3-", *no3}};
        const std::string& src = cells[8];
        if (src == "synthetic")
            e.meta.source = SampleSource::synthetic;
        else if (src == "influent")
            e.meta.source = SampleSource::influent;
        else if (src == "mixed_liquors")
            e.meta.source = SampleSource::mixed_liquors;
        else if (src == "effluent")
            e.meta.source = SampleSource::effluent;
        else
            throw MalformedRow("sweep manifest line " + std::to_string(lineno) +
                               ": unknown source " + src);
        e.file = cells[9];
        entries.push_back(e);
    }
    return entries;
}

Voltammogram load_sweep(const SweepManifestEntry& entry) {
    const std::string path = data_dir() + "/voltammograms/" + entry.file;
    return parse_voltammogram(read_text_file(path), entry.meta);
}

}  // namespace voltacal
