#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace safegrid::harness {

/// One completed training episode. `s2c_loss` carries the most recent
/// safety-model round loss at the time the episode ended: NaN when the agent
/// trains a safety model but no round has produced a loss yet, and unset for
/// agents without one.
struct EpisodeRow {
  std::uint64_t seed = 0;
  int episode = 0;
  long env_step = 0;
  double episode_return = 0.0;
  int length = 0;
  double cost = 0.0;
  bool failed = false;
  bool succeeded = false;
  double epsilon = 0.0;
  double lambda = 0.0;
  bool has_s2c_loss = false;
  double s2c_loss = 0.0;
};

struct MetricsLog {
  std::vector<EpisodeRow> rows;
};

inline constexpr const char* kMetricsHeader =
    "seed,episode,env_step,return,length,cost,failed,succeeded,epsilon,lambda,s2c_loss";

/// Shortest round-trip decimal form of a double ("nan" for NaN).
std::string format_double(double v);

std::string to_csv(const MetricsLog& log);
void write_csv(const MetricsLog& log, const std::filesystem::path& path);

}  // namespace safegrid::harness
