#pragma once

#include "afshar/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace afshar {

inline constexpr const char* kToolVersion = "0.1.0";

/// Formats a double with 17 significant digits so re-parsing round-trips
/// exactly.
std::string format_double(double value);

/// Reads a whole file. Throws IoError on failure.
std::string read_file(const std::string& path);

/// Writes a file atomically (write to a temporary name, then rename).
void atomic_write_file(const std::string& path, const std::string& contents);

/// Serializes rows as CSV (first row is the header).
std::string to_csv(const std::vector<std::vector<std::string>>& rows);

/// Run provenance written before any result file.
struct RunManifest {
    std::string command;
    std::string config_path;
    std::string output_directory;
    std::uint64_t seed = 0;
    std::string timestamp; ///< ISO 8601 UTC
    std::string tool_version = kToolVersion;
    std::string config_hash;
};

void write_manifest(const std::string& out_dir, const RunManifest& manifest);

/// Per-scenario result persistence: results/<id>.json plus the raw profile
/// dump profiles/<id>.csv and the grid-plane intensity intensity/<id>.f32.
void persist_run_result(const std::string& out_dir, const RunResult& result);

/// Loads every results/<id>.json under out_dir. Returns an empty vector
/// when there are none.
std::vector<RunResult> load_run_results(const std::string& out_dir);

/// RunResult JSON round-trip (byte-identical for identical inputs).
std::string run_result_to_json(const RunResult& result);
RunResult run_result_from_json(const std::string& json_text);

/// Flux table over a set of results. Columns:
/// scenario, flux1, flux2, blocked, elsewhere, reduction, ci_low, ci_high.
/// The reduction compares each grid scenario against its no-grid baseline
/// (S2, S3 vs S1; S4 vs S5) using Monte Carlo tallies when present and
/// field powers otherwise; scenarios without a baseline leave it empty.
std::string flux_table_csv(const std::vector<RunResult>& results);

/// Comparison table as CSV (key, value, flagged, missing, provenance,
/// detail) and as a short plain-text block.
std::string summary_csv(const ComparisonTable& table);
std::string summary_text(const ComparisonTable& table);

/// One row of the parameter sweep table.
struct SweepRow {
    double a = 0.0;
    double loss = 0.0;
    double v_t_closed = 0.0;
    double v_t_fullwave = 0.0;
    double v_flores = 0.0;
    double k_no_grid = 0.0;
    double k_with_grid = 0.0;
    double dual_flores = 0.0;
    double dual_steuernagel = 0.0;
};

std::string sweep_table_csv(const std::vector<SweepRow>& rows);

/// Renders an intensity image as an 8-bit binary PGM, normalized per image
/// to its maximum; the normalization constant goes to a JSON sidecar next
/// to the image.
void write_pgm_with_sidecar(const std::string& path, const IntensityImage& image);

} // namespace afshar
