#pragma once

#include <Eigen/Core>
#include <vector>

namespace safegrid {

/// One environment interaction. `cost` is binary: 1 when the transition
/// entered a cost-inducing (unsafe) state, 0 otherwise. `terminal` means the
/// environment ended the episode (goal or failure); `truncated` means the
/// step limit was hit. The two are mutually exclusive.
struct Transition {
  Eigen::VectorXd obs;
  int action = 0;
  double reward = 0.0;
  int cost = 0;
  Eigen::VectorXd next_obs;
  bool terminal = false;
  bool truncated = false;
};

/// An ordered episode. `failed` means the final transition entered an unsafe
/// state (cost 1 and terminal); `succeeded` means the goal was reached.
struct Trajectory {
  std::vector<Transition> transitions;
  bool failed = false;
  bool succeeded = false;

  bool complete() const {
    return !transitions.empty() &&
           (transitions.back().terminal || transitions.back().truncated);
  }
};

struct EpisodeMetrics {
  double episode_return = 0.0;  // undiscounted reward sum, as reported
  int length = 0;
  double episode_cost = 0.0;
  bool failed = false;
  bool succeeded = false;
};

/// Discounted reward sum over the trajectory. gamma must lie in [0, 1).
double discounted_return(const Trajectory& traj, double gamma);

/// Discounted cost sum over the trajectory. gamma must lie in [0, 1).
double discounted_cost(const Trajectory& traj, double gamma);

EpisodeMetrics summarize(const Trajectory& traj);

}  // namespace safegrid
