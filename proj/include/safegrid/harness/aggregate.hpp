#pragma once

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <vector>

#include "safegrid/harness/metrics.hpp"

namespace safegrid::harness {

/// Median and interquartile range. Aggregation across seeds uses these only
/// (no means), so a single outlier seed cannot flip a directional result.
struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

Quartiles quartiles(std::vector<double> values);
double median(std::vector<double> values);

/// Per-seed scalars derived from the episode rows of one run.
struct SeedSummary {
  std::uint64_t seed = 0;
  int episodes = 0;
  double final_success_rate = 0.0;  // over the last (up to) 100 episodes
  double final_return = 0.0;        // mean return over the same window
  long total_failures = 0;
  double total_cost = 0.0;
  double cost_rate = 0.0;           // total cost / total env steps, exact
  long steps_to_half_success = -1;  // first step with 50% rolling success; -1 if never
};

inline constexpr int kFinalWindow = 100;
inline constexpr int kReturnWindow = 20;
inline constexpr long kCurveCheckpointEvery = 500;

SeedSummary summarize_seed(const std::vector<EpisodeRow>& rows, std::uint64_t seed,
                           long total_steps);

struct CurvePoint {
  long env_step = 0;
  Quartiles rolling_return;       // mean return over the last 20 episodes
  Quartiles rolling_success;      // success rate over the last 100 episodes
  Quartiles cumulative_failures;
};

std::vector<CurvePoint> aggregate_curves(const MetricsLog& log,
                                         const std::vector<std::uint64_t>& seeds,
                                         long total_steps);

nlohmann::json to_json(const SeedSummary& s);
nlohmann::json to_json(const Quartiles& q);
nlohmann::json to_json(const CurvePoint& p);

}  // namespace safegrid::harness
