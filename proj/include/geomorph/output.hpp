#pragma once

// Experiment artifacts: raw field dumps with JSON sidecars, CSV metrics and
// traces, PGM previews and a content-hashed manifest.

#include "geomorph/morph.hpp"
#include "geomorph/scalar_field.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace geomorph {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One dumped field. member < 0 marks a non-ensemble field (truth, observations).
struct FieldRecord {
    std::string name;
    std::string stage;
    int member = -1;
    ScalarField field;
};

/// Mean-square error of one variable against the truth at one stage.
/// mean_member_mse averages the members' MSEs; ensemble_mean_mse is the MSE
/// of the ensemble-mean field.
struct MetricRow {
    std::string stage;
    std::string variable;
    double mean_member_mse = 0.0;
    double ensemble_mean_mse = 0.0;
};

struct TotalsRow {
    std::string stage;
    int member = -1;
    ConservedTotals totals;
};

struct TraceRecord {
    std::string stage;
    int member = 0;
    MorphTrace trace;
};

struct ExperimentReport {
    std::string name;
    std::string pipeline;
    /// Canonical JSON of the resolved config; written as config.json when set.
    std::string config_json;
    std::vector<FieldRecord> fields;
    std::vector<MetricRow> metrics;
    std::vector<TotalsRow> totals;
    std::vector<TraceRecord> traces;

    bool empty() const {
        return config_json.empty() && fields.empty() && metrics.empty() && totals.empty() && traces.empty();
    }
    /// Throws std::out_of_range when absent.
    const MetricRow& metric(const std::string& stage, const std::string& variable) const;
};

struct ManifestEntry {
    std::string path;
    std::uintmax_t bytes = 0;
    std::string sha256;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// Little-endian float64 values in storage order (row-major, y fastest).
void write_raw_field(const ScalarField& field, const std::filesystem::path& path);
ScalarField read_raw_field(const std::filesystem::path& path, const GridSpec& grid);

/// Reads a dump written by emit_outputs, taking the grid from its sidecar.
ScalarField read_field_dump(const std::filesystem::path& raw_path);

/// 8-bit binary PGM, min-max scaled; the scale goes in a header comment.
/// Image rows run from the largest y down, columns along x.
void write_pgm(const ScalarField& field, const std::filesystem::path& path);

std::string sha256_file(const std::filesystem::path& path);

/// Writes every artifact of `report` under `dir` and finally manifest.json,
/// which lists all other files sorted by path. Returns the manifest entries.
/// Throws OutputError when the directory or a file cannot be written.
std::vector<ManifestEntry> emit_outputs(const ExperimentReport& report, const std::filesystem::path& dir);

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest_path);

} // namespace geomorph
