#pragma once

#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <vector>

#include "safegrid/harness/aggregate.hpp"
#include "safegrid/harness/config.hpp"
#include "safegrid/harness/metrics.hpp"

namespace safegrid::harness {

struct RunResult {
  MetricsLog log;
  std::vector<SeedSummary> summaries;
  nlohmann::json report;
};

/// Trains one agent per seed (ascending seed order) and writes metrics.csv,
/// report.json, and final checkpoints under out_dir. Handles the transfer
/// block when present; the arm is recorded in the report. On a mid-run
/// failure the rows gathered so far are flushed before the error propagates.
RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// One full run per sweep value plus a combined report tabulating the
/// summary scalars per value (report.json in out_dir).
nlohmann::json run_ablation(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Risk-reward sweep: runs the configured kind and its safety-augmented
/// counterpart for every sweep value, emitting tradeoff.csv and report.json
/// with (total failures, final return) quartiles per setting.
nlohmann::json run_tradeoff(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Finite-difference verification of the backward pass for both the
/// Q-regression and the softmax safety heads. Prints per-layer worst
/// parameters; returns 0 when every check is within tolerance.
int run_gradcheck(std::ostream& out, int nets_per_head = 20, double tolerance = 1e-4);

}  // namespace safegrid::harness
