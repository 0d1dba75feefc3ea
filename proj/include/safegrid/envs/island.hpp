#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "safegrid/core/rng.hpp"
#include "safegrid/envs/grid.hpp"

namespace safegrid::envs {

/// A family of island layouts that share width/height so observations have
/// identical dimensionality. Each reset picks one variant uniformly.
struct IslandSuite {
  std::vector<GridSpec> variants;

  int width() const { return variants.empty() ? 0 : variants.front().width; }
  int height() const { return variants.empty() ? 0 : variants.front().height; }
};

/// The four shipped layouts (also available as data files under data/islands).
IslandSuite builtin_island_suite();

/// Loads a suite from layout files; validates shared dimensionality.
IslandSuite load_island_suite(const std::vector<std::filesystem::path>& paths);

/// Keeps only the listed variant indices (used by transfer experiments).
IslandSuite select_variants(const IslandSuite& suite, const std::vector<int>& indices);

struct RewardScheme {
  double step_reward = -0.01;
  double goal_reward = 1.0;
  double water_penalty = -1.0;
  int step_limit = 100;
  double slip_prob = 0.0;   // action-slip hook; 0 keeps dynamics deterministic
  bool normalize_gt = false;
};

struct EnvState {
  int variant_index = 0;
  Coord agent_pos;
  int steps_taken = 0;
};

struct StepOutcome {
  EnvState next;
  double reward = 0.0;
  int cost = 0;
  bool terminal = false;
  bool truncated = false;
};

struct EncodeOptions {
  bool include_gt = false;
  bool normalize_gt = false;
};

// Actions: 0 = left, 1 = right, 2 = up, 3 = down. There is no stay action.
inline constexpr int kNumActions = 4;

/// Starts a fresh episode on a uniformly chosen variant.
EnvState reset(const IslandSuite& suite, Rng& rng);

/// True while the episode can still be stepped.
bool episode_active(const IslandSuite& suite, const RewardScheme& scheme, const EnvState& state);

/// Applies one action. Moving into a wall keeps the position (no penalty).
/// Entering water terminates with cost 1 and the water penalty; entering the
/// goal terminates with the goal reward (replacing the step reward). Hitting
/// the step limit without a terminal event truncates. Deterministic:
/// identical (state, action) yields identical output.
StepOutcome step(const IslandSuite& suite, const RewardScheme& scheme, const EnvState& state,
                 int action);

/// Replaces the action with a uniform one with probability slip_prob.
/// Consumes no randomness when slip_prob is 0.
int maybe_slip(int action, double slip_prob, Rng& rng);

/// Minimum Manhattan distance from the agent to any water cell of the
/// current variant. A variant with no water yields the sentinel
/// width + height.
double gt_safety(const IslandSuite& suite, const EnvState& state);

/// One-hot channel encoding of the full grid, channels {agent, water, goal,
/// land-or-wall}, each flattened row-major; exactly one channel is hot per
/// cell. With include_gt the safety distance is appended as one extra
/// feature (raw, or divided by width + height when normalize_gt is set).
Eigen::VectorXd encode(const IslandSuite& suite, const EnvState& state,
                       const EncodeOptions& opts = {});

/// Feature length produced by encode for this suite.
int encoded_size(const IslandSuite& suite, const EncodeOptions& opts = {});

}  // namespace safegrid::envs
