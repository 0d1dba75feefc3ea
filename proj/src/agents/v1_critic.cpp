#include "safegrid/agents/v1_critic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "safegrid/nn/losses.hpp"

namespace safegrid::agents {

V1Critic::V1Critic(int obs_dim, const s2c::SafetyConfig& config, int window_episodes, Rng& rng)
    : config_(config), window_episodes_(window_episodes), obs_dim_(obs_dim) {
  if (window_episodes <= 0) throw std::invalid_argument("v1 critic: window must be positive");
  std::vector<int> dims;
  dims.push_back(obs_dim);
  dims.insert(dims.end(), config_.hidden_dims.begin(), config_.hidden_dims.end());
  dims.push_back(1);
  live_ = nn::make_mlp<double>(dims, nn::Head::linear, rng);
  frozen_ = live_;
  optimizer_ = nn::Adam<double>(live_, {.learning_rate = config_.learning_rate});
}

void V1Critic::ingest(const Trajectory& traj) {
  if (!traj.complete()) throw std::logic_error("v1 critic: trajectory is not complete");
  const int n = static_cast<int>(traj.transitions.size());
  std::vector<Sample> episode;
  episode.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    const bool unsafe_soon = traj.failed && (n - t) <= config_.horizon;
    episode.push_back({traj.transitions[static_cast<std::size_t>(t)].obs,
                       unsafe_soon ? 1.0 : 0.0});
  }
  episodes_.push_back(std::move(episode));
  while (static_cast<int>(episodes_.size()) > window_episodes_) episodes_.pop_front();
}

std::size_t V1Critic::window_size() const {
  std::size_t n = 0;
  for (const auto& e : episodes_) n += e.size();
  return n;
}

double V1Critic::train_round(Rng& rng) {
  const std::size_t total = window_size();
  if (total == 0) return std::numeric_limits<double>::quiet_NaN();

  // Flatten the window index space once per round.
  std::vector<const Sample*> flat;
  flat.reserve(total);
  for (const auto& e : episodes_) {
    for (const auto& s : e) flat.push_back(&s);
  }

  const int batch = std::min<int>(config_.batch_size, static_cast<int>(total));
  Eigen::MatrixXd inputs(obs_dim_, batch);
  std::vector<double> labels(static_cast<std::size_t>(batch));
  double loss_sum = 0.0;
  long samples = 0;

  for (int round = 0; round < config_.updates_per_round; ++round) {
    for (int i = 0; i < batch; ++i) {
      const Sample& s = *flat[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(total)))];
      inputs.col(i) = s.obs;
      labels[static_cast<std::size_t>(i)] = s.label;
    }
    nn::Trace<double> trace;
    Eigen::MatrixXd logits = nn::forward<double>(live_, inputs, &trace);
    Eigen::MatrixXd grad(1, batch);
    for (int i = 0; i < batch; ++i) {
      auto [loss, g] = nn::bce_with_logits<double>(logits(0, i), labels[static_cast<std::size_t>(i)]);
      loss_sum += loss;
      grad(0, i) = g / static_cast<double>(batch);
    }
    samples += batch;
    optimizer_.step(live_, nn::backward<double>(live_, trace, grad));
  }
  return loss_sum / static_cast<double>(samples);
}

double V1Critic::predict(const Eigen::VectorXd& obs, bool use_frozen) const {
  const double logit = nn::forward<double>(use_frozen ? frozen_ : live_, obs)[0];
  return 1.0 / (1.0 + std::exp(-logit));
}

}  // namespace safegrid::agents
