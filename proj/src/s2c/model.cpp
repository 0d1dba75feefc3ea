#include "safegrid/s2c/model.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "safegrid/nn/checkpoint.hpp"

namespace safegrid::s2c {

namespace {

std::vector<int> network_dims(int obs_dim, const SafetyConfig& cfg) {
  std::vector<int> dims;
  dims.push_back(obs_dim);
  dims.insert(dims.end(), cfg.hidden_dims.begin(), cfg.hidden_dims.end());
  dims.push_back(cfg.bins());
  return dims;
}

}  // namespace

S2cModel::S2cModel(int obs_dim, const SafetyConfig& config, Rng& rng)
    : config_(config), obs_dim_(obs_dim) {
  config_.validate();
  if (obs_dim <= 0) throw std::invalid_argument("s2c model: obs_dim must be positive");
  auto dims = network_dims(obs_dim, config_);
  live_ = nn::make_mlp<double>(dims, nn::Head::softmax, rng);
  frozen_ = live_;
  optimizer_ = nn::Adam<double>(live_, {.learning_rate = config_.learning_rate});
}

S2cModel::S2cModel(SafetyConfig config, int obs_dim, nn::Mlp<double> net)
    : config_(std::move(config)),
      obs_dim_(obs_dim),
      live_(std::move(net)),
      frozen_(live_),
      optimizer_(live_, {.learning_rate = config_.learning_rate}) {}

double S2cModel::train_round(const S2cBuffer& buffer, Rng& rng) {
  if (!trainable_) {
    throw std::logic_error("s2c model: train_round called on a frozen model");
  }
  if (buffer.size() < static_cast<std::size_t>(config_.batch_size)) {
    return std::numeric_limits<double>::quiet_NaN();  // skip, not an error
  }
  const int batch = config_.batch_size;
  double loss_sum = 0.0;
  long samples = 0;
  Eigen::MatrixXd inputs(obs_dim_, batch);
  std::vector<int> targets(static_cast<std::size_t>(batch));

  for (int round = 0; round < config_.updates_per_round; ++round) {
    for (int i = 0; i < batch; ++i) {
      const auto& entry = buffer[static_cast<std::size_t>(
          rng.uniform_int(static_cast<int>(buffer.size())))];
      inputs.col(i) = entry.obs;
      targets[static_cast<std::size_t>(i)] = config_.bin_of(entry.label.delta);
    }
    nn::Trace<double> trace;
    Eigen::MatrixXd probs = nn::forward<double>(live_, inputs, &trace);

    Eigen::MatrixXd grad = probs;
    for (int i = 0; i < batch; ++i) {
      const int t = targets[static_cast<std::size_t>(i)];
      loss_sum += -std::log(std::max(probs(t, i), 1e-12));
      grad(t, i) -= 1.0;
    }
    grad /= static_cast<double>(batch);
    samples += batch;

    optimizer_.step(live_, nn::backward<double>(live_, trace, grad));
  }
  return loss_sum / static_cast<double>(samples);
}

Eigen::VectorXd S2cModel::predict(const Eigen::VectorXd& obs, bool use_frozen) const {
  return nn::forward<double>(use_frozen ? frozen_ : live_, obs);
}

Eigen::MatrixXd S2cModel::predict_batch(const Eigen::MatrixXd& obs_cols, bool use_frozen) const {
  return nn::forward<double>(use_frozen ? frozen_ : live_, obs_cols);
}

void S2cModel::snapshot() { frozen_ = live_; }

void S2cModel::save(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["version"] = nn::kCheckpointVersion;
  j["type"] = "s2c";
  j["obs_dim"] = obs_dim_;
  j["safety"] = {{"horizon", config_.horizon},
                 {"bin_width", config_.bin_width},
                 {"buffer_capacity", config_.buffer_capacity},
                 {"batch_size", config_.batch_size},
                 {"train_every", config_.train_every},
                 {"updates_per_round", config_.updates_per_round},
                 {"snapshot_every", config_.snapshot_every},
                 {"learning_rate", config_.learning_rate},
                 {"dedicated_safe_bin", config_.dedicated_safe_bin},
                 {"hidden_dims", config_.hidden_dims}};
  j["net"] = nn::to_json(live_);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("s2c save: cannot write " + path.string());
  out << j.dump(2) << '\n';
}

S2cModel S2cModel::load(const std::filesystem::path& path, int expected_obs_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("s2c load: cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  if (j.value("type", "") != "s2c") {
    throw std::invalid_argument("s2c load: not a steps-to-cost checkpoint");
  }
  SafetyConfig cfg;
  const auto& s = j.at("safety");
  cfg.horizon = s.at("horizon").get<int>();
  cfg.bin_width = s.at("bin_width").get<int>();
  cfg.buffer_capacity = s.at("buffer_capacity").get<int>();
  cfg.batch_size = s.at("batch_size").get<int>();
  cfg.train_every = s.at("train_every").get<int>();
  cfg.updates_per_round = s.at("updates_per_round").get<int>();
  cfg.snapshot_every = s.at("snapshot_every").get<int>();
  cfg.learning_rate = s.at("learning_rate").get<double>();
  cfg.dedicated_safe_bin = s.at("dedicated_safe_bin").get<bool>();
  cfg.hidden_dims = s.at("hidden_dims").get<std::vector<int>>();
  cfg.validate();

  const int obs_dim = j.at("obs_dim").get<int>();
  if (expected_obs_dim >= 0 && obs_dim != expected_obs_dim) {
    throw std::invalid_argument("s2c load: observation dim mismatch, expected " +
                                std::to_string(expected_obs_dim) + " but checkpoint has " +
                                std::to_string(obs_dim));
  }
  nn::Mlp<double> net = nn::mlp_from_json(j.at("net"));
  if (net.input_size() != obs_dim || net.output_size() != cfg.bins()) {
    throw std::invalid_argument("s2c load: network shape does not match safety config");
  }
  return S2cModel(std::move(cfg), obs_dim, std::move(net));
}

Eigen::VectorXd augment(const Eigen::VectorXd& obs, const Eigen::VectorXd& dist) {
  Eigen::VectorXd out(obs.size() + dist.size());
  out << obs, dist;
  return out;
}

}  // namespace safegrid::s2c
