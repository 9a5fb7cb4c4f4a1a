// Experiment orchestration: a single JSON config drives load -> (bend sweep)
// -> ball -> cloud -> estimators, writing a report bundle with a manifest of
// content hashes. Identical config and seed give byte-identical bundles.

#pragma once

#include "conelab/asymptotics.hpp"
#include "conelab/bending.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conelab {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A pipeline stage failure, tagged with the stage name for exit codes.
struct stage_error : std::runtime_error {
    std::string stage;
    stage_error(std::string stage_, const std::string& msg)
        : std::runtime_error("[stage:" + stage_ + "] " + msg), stage(std::move(stage_)) {}
};

struct ExperimentConfig {
    std::string system_path;
    int radius = 6;
    std::vector<std::string> q_sweep;          // rationals as text; empty = no bending
    std::vector<double> directions_deg;        // default: 9 directions over [0, 45]
    GrowthOptions growth;
    std::vector<std::pair<std::string, std::vector<double>>> exponent_forms; // name -> {c1,c2}; "rho" resolved per n
    ProjectionOptions projection;
    int full_pairing_stride = 64;
    size_t zariski_sample = 300;
    size_t memory_budget = size_t(8) << 30;
    uint64_t seed = 7;
    int threads = 0;
    std::string out_dir = "out";

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);
    std::string echo_json() const; // canonical echo for the manifest
};

/// One system's estimator results, as written to <prefix>_growth.json.
struct SystemReport {
    std::string q_label;
    uint64_t ball_size = 0;
    ConeEstimate cone;
    std::vector<DirectionalGrowth> directions;
    std::vector<std::pair<std::string, ExponentFit>> exponents; // first entry is rho
    Verdict verdict;
    BoundsReport bounds;
    bool kmo_ok = true;
    double kmo_combined_tol = 0.0;
    AnosovFit anosov;
    ZariskiRank zariski;
    size_t projection_failures = 0;
};

struct RunResult {
    std::vector<SystemReport> systems; // one per sweep entry (single entry without sweep)
    std::string out_dir;
};

/// Execute the full pipeline; writes the report bundle under cfg.out_dir and
/// returns the in-memory reports. Throws stage_error; on failure a manifest
/// with status "invalid" and the failed stage is still written.
RunResult run_experiment(const ExperimentConfig& cfg);

} // namespace conelab
