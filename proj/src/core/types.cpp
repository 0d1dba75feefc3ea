#include "safegrid/core/types.hpp"

#include <stdexcept>

namespace safegrid {

namespace {

void check_inputs(const Trajectory& traj, double gamma) {
  if (traj.transitions.empty()) {
    throw std::invalid_argument("trajectory is empty");
  }
  if (gamma < 0.0 || gamma >= 1.0) {
    throw std::invalid_argument("gamma must lie in [0, 1)");
  }
}

}  // namespace

double discounted_return(const Trajectory& traj, double gamma) {
  check_inputs(traj, gamma);
  double sum = 0.0;
  double g = 1.0;
  for (const Transition& t : traj.transitions) {
    sum += g * t.reward;
    g *= gamma;
  }
  return sum;
}

double discounted_cost(const Trajectory& traj, double gamma) {
  check_inputs(traj, gamma);
  double sum = 0.0;
  double g = 1.0;
  for (const Transition& t : traj.transitions) {
    sum += g * static_cast<double>(t.cost);
    g *= gamma;
  }
  return sum;
}

EpisodeMetrics summarize(const Trajectory& traj) {
  if (traj.transitions.empty()) {
    throw std::invalid_argument("trajectory is empty");
  }
  EpisodeMetrics m;
  m.length = static_cast<int>(traj.transitions.size());
  for (const Transition& t : traj.transitions) {
    m.episode_return += t.reward;
    m.episode_cost += static_cast<double>(t.cost);
  }
  m.failed = traj.failed;
  m.succeeded = traj.succeeded;
  return m;
}

}  // namespace safegrid
