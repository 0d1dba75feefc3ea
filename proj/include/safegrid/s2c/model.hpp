#pragma once

#include <Eigen/Core>
#include <filesystem>

#include "safegrid/core/rng.hpp"
#include "safegrid/nn/adam.hpp"
#include "safegrid/nn/mlp.hpp"
#include "safegrid/s2c/buffer.hpp"
#include "safegrid/s2c/config.hpp"

namespace safegrid::s2c {

/// Steps-to-cost model: a softmax MLP mapping an observation to a
/// distribution over binned steps-to-cost, plus a frozen snapshot of itself.
/// Policy-side consumers (state augmentation, Q-target computation) read the
/// frozen net, which is only replaced at snapshot() calls, so the policy
/// trains against a representation that moves on a slow, explicit cadence.
class S2cModel {
 public:
  S2cModel(int obs_dim, const SafetyConfig& config, Rng& rng);

  /// updates_per_round minibatch steps: uniform sampling with replacement,
  /// NLL against the binned label, one optimizer step each. Returns the mean
  /// NLL over the round, or NaN when the buffer holds fewer than batch_size
  /// entries (the round is skipped).
  double train_round(const S2cBuffer& buffer, Rng& rng);

  Eigen::VectorXd predict(const Eigen::VectorXd& obs, bool use_frozen = true) const;
  Eigen::MatrixXd predict_batch(const Eigen::MatrixXd& obs_cols, bool use_frozen = true) const;

  /// frozen_net := copy(live_net).
  void snapshot();

  bool trainable() const { return trainable_; }
  void set_trainable(bool trainable) { trainable_ = trainable; }

  int obs_dim() const { return obs_dim_; }
  int bins() const { return config_.bins(); }
  const SafetyConfig& config() const { return config_; }

  nn::Mlp<double>& live_net() { return live_; }
  const nn::Mlp<double>& live_net() const { return live_; }
  const nn::Mlp<double>& frozen_net() const { return frozen_; }

  /// Checkpoint with a safety-config header. load() verifies the stored
  /// observation dimension against expected_obs_dim when given, and restores
  /// the frozen net as a snapshot of the saved parameters, so predictions
  /// reproduce the saved model bitwise.
  void save(const std::filesystem::path& path) const;
  static S2cModel load(const std::filesystem::path& path, int expected_obs_dim = -1);

 private:
  S2cModel(SafetyConfig config, int obs_dim, nn::Mlp<double> net);

  SafetyConfig config_;
  int obs_dim_;
  nn::Mlp<double> live_;
  nn::Mlp<double> frozen_;
  nn::Adam<double> optimizer_;
  bool trainable_ = true;
};

/// Concatenation [obs, dist]; the observation stays in front so downstream
/// consumers can slice it back off.
Eigen::VectorXd augment(const Eigen::VectorXd& obs, const Eigen::VectorXd& dist);

}  // namespace safegrid::s2c
