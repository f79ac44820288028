#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "voltacal/calib.hpp"
#include "voltacal/cvdata.hpp"
#include "voltacal/errors.hpp"
#include "voltacal/inferstat.hpp"

namespace voltacal {

enum class TableSchema { replicate_matrix, averaged_summary, characterization };

struct AveragedRow {
    double conc = 0.0;           // mg P/L
    MeasuredQuantity current;    // uA, error slot = printed SD
    MeasuredQuantity potential;  // V, error slot = printed SD
};

// One row of a characterisation table. Values stay strings because some
// entries are detection-limit text like "<1.90" or "Out of Range".
struct CharacterizationRow {
    std::string component;
    std::string influent;
    std::string mixed_liquors;
    std::string effluent;
    std::string units;

    // Numeric view of a column; empty for non-numeric text.
    std::optional<double> numeric(const std::string& column) const;
};

struct TableFixture {
    std::string table_id;
    TableSchema schema = TableSchema::replicate_matrix;
    std::string provenance;
    std::uint64_t checksum = 0;
    std::vector<std::string> notes;
    std::vector<std::string> anomalies;  // flagged cells, never corrected

    // replicate_matrix payload, (level, conc, replicate) row-major
    std::string factor_a_name;
    std::vector<std::string> factor_levels;
    std::vector<double> concentrations;
    std::size_t replicates = 0;
    std::vector<double> currents;
    std::size_t duplicated_from_replicates = 0;  // 0 = genuine replicates

    // averaged_summary payload
    std::vector<AveragedRow> averaged;
    std::string aggregated_from_table;  // empty when not an aggregate
    std::string aggregated_from_level;
    std::vector<double> rows_omitted;

    // characterization payload
    std::vector<CharacterizationRow> characterization;

    // replicate_matrix accessors
    double current_at(std::size_t level, std::size_t conc_idx, std::size_t rep) const;
    std::size_t level_index(const std::string& level) const;
    FactorialData to_factorial() const;
    // 7x r block of one factor level, conc-major
    std::vector<double> block(const std::string& level) const;
    // per-condition mean +- SD over all replicates of one level
    std::vector<CalibrationPoint> replicate_mean_points(const std::string& level) const;
    // same, but over the genuine replicates only when the block was
    // duplicated to balance a design
    std::vector<CalibrationPoint> unique_replicate_mean_points(const std::string& level) const;
    ReplicateSummary condition_summary(const std::string& level, std::size_t conc_idx) const;

    // averaged_summary accessors
    std::vector<CalibrationPoint> current_points() const;
    std::vector<CalibrationPoint> potential_points() const;

    // characterization accessor
    const CharacterizationRow& component(const std::string& name) const;
};

// Fixture root: $VOLTACAL_DATA_DIR when set, else the bundled data directory.
std::string data_dir();

// Loads data/tables/<id>.csv + <id>.json, verifying the manifest checksum
// against the CSV bytes. Throws UnknownTable / ChecksumMismatch.
TableFixture load_table(const std::string& table_id);

std::uint64_t fnv1a64(const void* data, std::size_t size);

// Bundled voltammogram sweeps.
struct SweepManifestEntry {
    SampleMeta meta;
    std::size_t replicate = 0;
    std::string file;  // relative to data_dir()/voltammograms
};

std::vector<SweepManifestEntry> load_sweep_manifest();
Voltammogram load_sweep(const SweepManifestEntry& entry);

}  // namespace voltacal
