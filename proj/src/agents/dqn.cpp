#include "safegrid/agents/dqn.hpp"

#include <cmath>
#include <stdexcept>

#include "safegrid/nn/losses.hpp"

namespace safegrid::agents {

std::string to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::dqn: return "DQN";
    case AgentKind::dqn_gt: return "DQN_GT";
    case AgentKind::sr_dqn: return "SR_DQN";
    case AgentKind::lag_dqn: return "LAG_DQN";
    case AgentKind::sr_lag_dqn: return "SR_LAG_DQN";
    case AgentKind::dqn_reset: return "DQN_RESET";
    case AgentKind::v1_scalar: return "V1_SCALAR";
    case AgentKind::v2_onpolicy: return "V2_ONPOLICY";
  }
  throw std::logic_error("unknown agent kind");
}

AgentKind agent_kind_from_string(const std::string& name) {
  for (AgentKind k : {AgentKind::dqn, AgentKind::dqn_gt, AgentKind::sr_dqn, AgentKind::lag_dqn,
                      AgentKind::sr_lag_dqn, AgentKind::dqn_reset, AgentKind::v1_scalar,
                      AgentKind::v2_onpolicy}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown agent kind '" + name + "'");
}

bool uses_s2c(AgentKind kind) {
  return kind == AgentKind::sr_dqn || kind == AgentKind::sr_lag_dqn ||
         kind == AgentKind::v2_onpolicy;
}

bool uses_lagrange(AgentKind kind) {
  return kind == AgentKind::lag_dqn || kind == AgentKind::sr_lag_dqn;
}

void DqnConfig::validate() const {
  if (gamma < 0.0 || gamma >= 1.0) throw std::invalid_argument("dqn: gamma must lie in [0, 1)");
  if (epsilon_start < epsilon_end || epsilon_end < 0.0 || epsilon_start > 1.0) {
    throw std::invalid_argument("dqn: epsilon schedule must run from start down to end in [0, 1]");
  }
  if (epsilon_decay_steps <= 0 || replay_capacity <= 0 || batch_size <= 0 ||
      target_update_every <= 0 || learn_every <= 0 || reset_every <= 0 ||
      v1_window_episodes <= 0) {
    throw std::invalid_argument("dqn: cadence fields must be positive");
  }
  if (learning_rate <= 0.0) throw std::invalid_argument("dqn: learning rate must be positive");
  if (huber_delta <= 0.0) throw std::invalid_argument("dqn: huber delta must be positive");
  if (lambda_init < 0.0) throw std::invalid_argument("dqn: lambda_init must be non-negative");
}

double epsilon_at(const DqnConfig& cfg, long env_step) {
  const double frac =
      std::min(1.0, static_cast<double>(env_step - 1) / static_cast<double>(cfg.epsilon_decay_steps));
  return cfg.epsilon_start + frac * (cfg.epsilon_end - cfg.epsilon_start);
}

Replay::Replay(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay: capacity must be positive");
  entries_.resize(capacity);
}

void Replay::push(Transition t) {
  entries_[next_] = std::move(t);
  next_ = (next_ + 1) % capacity_;
  if (filled_ < capacity_) ++filled_;
}

int select_action(const nn::Mlp<double>& qnet, const Eigen::VectorXd& obs_aug, double epsilon,
                  Rng& rng) {
  const int n_actions = qnet.output_size();
  if (rng.uniform01() < epsilon) return rng.uniform_int(n_actions);
  Eigen::VectorXd q = nn::forward<double>(qnet, obs_aug);
  int best = 0;
  for (int a = 1; a < n_actions; ++a) {
    if (q[a] > q[best]) best = a;
  }
  return best;
}

double dqn_target(const Transition& t, const nn::Mlp<double>& qnet_target,
                  const Eigen::VectorXd& next_obs_aug, double gamma, double lambda) {
  const double shaped = t.reward - lambda * static_cast<double>(t.cost);
  if (t.terminal) return shaped;
  Eigen::VectorXd q = nn::forward<double>(qnet_target, next_obs_aug);
  return shaped + gamma * q.maxCoeff();
}

double q_update(nn::Mlp<double>& qnet, nn::Adam<double>& optimizer,
                const nn::Mlp<double>& qnet_target, const Eigen::MatrixXd& obs_aug,
                const Eigen::MatrixXd& next_obs_aug, const std::vector<int>& actions,
                const std::vector<double>& rewards, const std::vector<int>& costs,
                const std::vector<bool>& terminals, double gamma, double lambda, double delta) {
  const int batch = static_cast<int>(obs_aug.cols());
  if (batch == 0) throw std::invalid_argument("q_update: empty batch");

  Eigen::MatrixXd next_q = nn::forward<double>(qnet_target, next_obs_aug);
  nn::Trace<double> trace;
  Eigen::MatrixXd q = nn::forward<double>(qnet, obs_aug, &trace);

  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  double loss_sum = 0.0;
  for (int i = 0; i < batch; ++i) {
    const double shaped = rewards[static_cast<std::size_t>(i)] -
                          lambda * static_cast<double>(costs[static_cast<std::size_t>(i)]);
    double target = shaped;
    if (!terminals[static_cast<std::size_t>(i)]) {
      target += gamma * next_q.col(i).maxCoeff();
    }
    const int a = actions[static_cast<std::size_t>(i)];
    auto [loss, g] = nn::huber_loss<double>(q(a, i), target, delta);
    loss_sum += loss;
    grad(a, i) = g / static_cast<double>(batch);
  }
  const double mean_loss = loss_sum / static_cast<double>(batch);
  if (!std::isfinite(mean_loss)) {
    throw std::runtime_error("q_update: non-finite loss");
  }
  optimizer.step(qnet, nn::backward<double>(qnet, trace, grad));
  return mean_loss;
}

}  // namespace safegrid::agents
