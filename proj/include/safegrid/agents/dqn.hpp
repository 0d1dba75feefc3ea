#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "safegrid/core/rng.hpp"
#include "safegrid/core/types.hpp"
#include "safegrid/nn/adam.hpp"
#include "safegrid/nn/mlp.hpp"

namespace safegrid::agents {

enum class AgentKind {
  dqn,          // vanilla baseline
  dqn_gt,       // ground-truth water-distance feature appended to the input
  sr_dqn,       // steps-to-cost distribution appended to the input
  lag_dqn,      // Lagrangian cost penalty on the reward
  sr_lag_dqn,   // both of the above
  dqn_reset,    // vanilla with periodic parameter re-initialization
  v1_scalar,    // scalar failure-likelihood critic appended (ablation)
  v2_onpolicy,  // steps-to-cost trained on the current policy's data only
};

std::string to_string(AgentKind kind);
AgentKind agent_kind_from_string(const std::string& name);

bool uses_s2c(AgentKind kind);
bool uses_lagrange(AgentKind kind);

struct DqnConfig {
  double gamma = 0.99;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  long epsilon_decay_steps = 20000;
  int replay_capacity = 20000;
  int batch_size = 64;
  long target_update_every = 1000;
  long learn_every = 4;
  double learning_rate = 1e-3;
  std::vector<int> hidden_dims = {64, 64};
  double huber_delta = 1.0;
  long reset_every = 10000;       // dqn_reset only
  double lambda_init = 0.0;       // lag kinds
  double lagrange_eta = 0.05;     // dual learning rate
  double cost_budget = 0.05;      // beta
  int v1_window_episodes = 20;    // v1_scalar only

  void validate() const;
};

/// Linear schedule from epsilon_start to epsilon_end over decay_steps.
double epsilon_at(const DqnConfig& cfg, long env_step);

/// Ring buffer of raw transitions. Observations are stored unaugmented;
/// augmentation is recomputed at training time from the current frozen
/// safety snapshot, so stale distributions never persist in stored samples.
class Replay {
 public:
  explicit Replay(std::size_t capacity);
  void push(Transition t);
  std::size_t size() const { return filled_; }
  const Transition& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::vector<Transition> entries_;
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::size_t filled_ = 0;
};

/// Epsilon-greedy action choice; greedy ties break toward the lowest index.
int select_action(const nn::Mlp<double>& qnet, const Eigen::VectorXd& obs_aug, double epsilon,
                  Rng& rng);

/// Single-transition TD target with the Lagrangian-shaped reward
/// r - lambda * cost. Terminal transitions do not bootstrap; truncated ones
/// do. next_obs_aug must already carry the transition's augmentation.
double dqn_target(const Transition& t, const nn::Mlp<double>& qnet_target,
                  const Eigen::VectorXd& next_obs_aug, double gamma, double lambda);

/// One batched Huber regression step of Q(obs)[action] toward the TD target.
/// Columns of obs_aug / next_obs_aug are the (already augmented) batch.
/// Returns the mean Huber loss; throws on a non-finite loss.
double q_update(nn::Mlp<double>& qnet, nn::Adam<double>& optimizer,
                const nn::Mlp<double>& qnet_target, const Eigen::MatrixXd& obs_aug,
                const Eigen::MatrixXd& next_obs_aug, const std::vector<int>& actions,
                const std::vector<double>& rewards, const std::vector<int>& costs,
                const std::vector<bool>& terminals, double gamma, double lambda, double delta);

}  // namespace safegrid::agents
