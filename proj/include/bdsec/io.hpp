#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bdsec/optimizer.hpp"

namespace bdsec {

using json = nlohmann::json;

// Shortest round-trip decimal form of a double ("%.17g"); used everywhere a
// number is written to an artifact so re-runs are byte-identical.
std::string fmt17(double v);

// ---- coupling matrices ----
json coupling_to_json(const CouplingMatrix& omega);
CouplingMatrix coupling_from_json(const json& j);

// ---- rate reports ----
json rate_report_to_json(const RateReport& r);
std::string rate_report_csv_header();
// One CSV row per user, tagged with the SNR point.
std::vector<std::string> rate_report_csv_rows(double snr_db, const RateReport& r);

// ---- convergence traces ----
std::string trace_csv_header();
std::string trace_csv_row(const TraceRow& row);

// ---- minimal JSON-schema validation ----
/// Supports: type, required, properties, items, enum, minimum, maximum,
// minItems, exclusiveMinimum. Returns human-readable errors with field paths
// (empty => valid).
std::vector<std::string> validate_schema(const json& instance, const json& schema,
                                         const std::string& path = "$");

// ---- scenario configuration ----
struct OutputOptions {
    std::string dir = ".";
    std::string format = "csv";  // "csv" | "json"
};

struct CouplingSource {
    bool from_files = false;
    CouplingProfile profile;             // when synthesized
    std::vector<std::string> user_files; // when loaded
    std::string eve_file;
    bool eve_zero = false;  // explicit "no eavesdropper" switch
};

struct ScenarioConfig {
    SystemDims dims;
    CouplingSource coupling;
    std::vector<double> snr_db;  // P grid in dB relative to unit noise
    SolverConfig solver;
    int mc_samples = 2000;
    std::uint64_t seed = 1;
    int workers = 1;
    OutputOptions outputs;
    // bench-only: grid of (K, M) cells
    std::vector<std::pair<int, int>> bench_grid;

    void validate() const;  // throws std::invalid_argument naming the field
};

// Schema shipped in-repo (schemas/scenario.schema.json mirrors this).
const json& scenario_schema();
const json& coupling_schema();
const json& verify_report_schema();

ScenarioConfig scenario_from_json(const json& j);
// Canonical serialization of a parsed config (defaults applied); the hash of
// this form goes into the provenance sidecar.
json scenario_to_json(const ScenarioConfig& cfg);

// Resolves the coupling source into concrete matrices (synthesis or file
// load). Throws std::invalid_argument on malformed files.
CouplingSet resolve_coupling(const ScenarioConfig& cfg);

// FNV-1a hash of the canonical (sorted-key) config dump, for the provenance
// sidecar.
std::string config_hash(const json& j);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace bdsec
