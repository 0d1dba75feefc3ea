#pragma once

#include <Eigen/Core>
#include <deque>
#include <vector>

#include "safegrid/core/rng.hpp"
#include "safegrid/core/types.hpp"
#include "safegrid/nn/adam.hpp"
#include "safegrid/nn/mlp.hpp"
#include "safegrid/s2c/config.hpp"

namespace safegrid::agents {

/// Scalar alternative to the steps-to-cost distribution: a sigmoid critic
/// estimating the likelihood that a failure occurs within the safety horizon
/// of a state, trained only on a window of recent episodes so the estimate
/// tracks the current policy. Shares the steps-to-cost cadence settings and
/// the frozen-snapshot discipline.
class V1Critic {
 public:
  V1Critic(int obs_dim, const s2c::SafetyConfig& config, int window_episodes, Rng& rng);

  /// Labels every visited state with "a failure happened within horizon
  /// steps later in this episode" and appends the episode to the window.
  void ingest(const Trajectory& traj);

  /// updates_per_round BCE minibatch steps on the window; returns the mean
  /// loss, or NaN when the window is empty (skipped).
  double train_round(Rng& rng);

  /// Failure likelihood in [0, 1] from the frozen (or live) net.
  double predict(const Eigen::VectorXd& obs, bool use_frozen = true) const;

  void snapshot() { frozen_ = live_; }

  std::size_t window_size() const;

 private:
  struct Sample {
    Eigen::VectorXd obs;
    double label;
  };

  s2c::SafetyConfig config_;
  int window_episodes_;
  int obs_dim_;
  nn::Mlp<double> live_;
  nn::Mlp<double> frozen_;
  nn::Adam<double> optimizer_;
  std::deque<std::vector<Sample>> episodes_;
};

}  // namespace safegrid::agents
