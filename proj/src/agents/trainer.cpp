#include "safegrid/agents/trainer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "safegrid/agents/v1_critic.hpp"
#include "safegrid/core/types.hpp"
#include "safegrid/s2c/labeling.hpp"

namespace safegrid::agents {

namespace {

// Substream ids of the master seed.
constexpr std::uint64_t kEnvStream = 1;
constexpr std::uint64_t kAgentStream = 2;
constexpr std::uint64_t kS2cStream = 3;
constexpr std::uint64_t kExploreStream = 4;

struct Pipeline {
  AgentKind kind;
  envs::EncodeOptions encode_opts;
  int raw_dim = 0;
  int aug_width = 0;
  const s2c::S2cModel* s2c = nullptr;
  const V1Critic* v1 = nullptr;
  const TrainHooks* hooks = nullptr;

  int q_input_dim() const { return raw_dim + aug_width; }

  Eigen::VectorXd augment_one(const Eigen::VectorXd& raw) const {
    if (aug_width == 0) return raw;
    Eigen::VectorXd out(raw.size() + aug_width);
    out.head(raw.size()) = raw;
    if (s2c) {
      out.tail(aug_width) = s2c->predict(raw, /*use_frozen=*/true);
    } else if (v1) {
      out[raw.size()] = v1->predict(raw, /*use_frozen=*/true);
    } else {
      out.tail(aug_width).setConstant(hooks->pad_value);
    }
    return out;
  }

  Eigen::MatrixXd augment_batch(const Eigen::MatrixXd& raw_cols) const {
    if (aug_width == 0) return raw_cols;
    Eigen::MatrixXd out(raw_cols.rows() + aug_width, raw_cols.cols());
    out.topRows(raw_cols.rows()) = raw_cols;
    if (s2c) {
      out.bottomRows(aug_width) = s2c->predict_batch(raw_cols, /*use_frozen=*/true);
    } else if (v1) {
      for (Eigen::Index i = 0; i < raw_cols.cols(); ++i) {
        out(raw_cols.rows(), i) = v1->predict(raw_cols.col(i), /*use_frozen=*/true);
      }
    } else {
      out.bottomRows(aug_width).setConstant(hooks->pad_value);
    }
    return out;
  }
};

}  // namespace

TrainResult train_agent(AgentKind kind, const envs::IslandSuite& suite,
                        const envs::RewardScheme& scheme, const DqnConfig& dqn_cfg,
                        const s2c::SafetyConfig& safety_cfg, std::uint64_t seed, long total_steps,
                        const TransferSetup* transfer, const TrainHooks* hooks) {
  dqn_cfg.validate();
  safety_cfg.validate(scheme.step_limit);
  if (suite.variants.empty()) throw std::invalid_argument("train_agent: empty suite");
  if (total_steps <= 0) throw std::invalid_argument("train_agent: total_steps must be positive");

  Rng master(seed);
  Rng env_rng = master.stream(kEnvStream);
  Rng agent_rng = master.stream(kAgentStream);
  Rng s2c_rng = master.stream(kS2cStream);
  Rng explore_rng = master.stream(kExploreStream);

  Pipeline pipe;
  pipe.kind = kind;
  pipe.hooks = hooks;
  pipe.encode_opts.include_gt = kind == AgentKind::dqn_gt;
  pipe.encode_opts.normalize_gt = scheme.normalize_gt;
  pipe.raw_dim = envs::encoded_size(suite, pipe.encode_opts);

  std::optional<s2c::S2cModel> s2c_model;
  std::optional<V1Critic> v1_critic;
  bool s2c_frozen = false;
  if (uses_s2c(kind)) {
    if (transfer && transfer->s2c_init) {
      s2c_model = *transfer->s2c_init;
      if (s2c_model->obs_dim() != pipe.raw_dim) {
        throw std::invalid_argument("train_agent: transferred safety model expects obs dim " +
                                    std::to_string(s2c_model->obs_dim()) + " but suite encodes " +
                                    std::to_string(pipe.raw_dim));
      }
      s2c_frozen = transfer->freeze_s2c;
      s2c_model->set_trainable(!s2c_frozen);
    } else {
      s2c_model.emplace(pipe.raw_dim, safety_cfg, s2c_rng);
    }
    pipe.s2c = &*s2c_model;
    pipe.aug_width = s2c_model->bins();
  } else if (kind == AgentKind::v1_scalar) {
    v1_critic.emplace(pipe.raw_dim, safety_cfg, dqn_cfg.v1_window_episodes, s2c_rng);
    pipe.v1 = &*v1_critic;
    pipe.aug_width = 1;
  } else if (hooks && hooks->pad_width > 0) {
    pipe.aug_width = hooks->pad_width;
  }

  const s2c::SafetyConfig& scfg = s2c_model ? s2c_model->config() : safety_cfg;

  std::vector<int> q_dims;
  q_dims.push_back(pipe.q_input_dim());
  q_dims.insert(q_dims.end(), dqn_cfg.hidden_dims.begin(), dqn_cfg.hidden_dims.end());
  q_dims.push_back(envs::kNumActions);
  nn::Mlp<double> qnet = nn::make_mlp<double>(q_dims, nn::Head::linear, agent_rng);
  if (transfer && transfer->policy_init) {
    if (transfer->policy_init->dims != qnet.dims) {
      throw std::invalid_argument("train_agent: transferred policy dims do not match");
    }
    qnet = *transfer->policy_init;
  }
  nn::Mlp<double> qnet_target = qnet;
  nn::Adam<double> optimizer(qnet, {.learning_rate = dqn_cfg.learning_rate});

  Replay replay(static_cast<std::size_t>(dqn_cfg.replay_capacity));
  s2c::S2cBuffer s2c_buffer(static_cast<std::size_t>(scfg.buffer_capacity));
  LagrangeState lagrange{.lambda = dqn_cfg.lambda_init,
                         .eta = dqn_cfg.lagrange_eta,
                         .budget = dqn_cfg.cost_budget};
  const bool lagrangian = uses_lagrange(kind);

  TrainResult result;
  envs::EnvState state;
  Trajectory traj;
  Eigen::VectorXd raw_obs;
  bool episode_open = false;
  int episode_index = 0;
  double last_s2c_loss = std::numeric_limits<double>::quiet_NaN();
  const bool logs_s2c = s2c_model.has_value() || v1_critic.has_value();

  // Batch scratch for q updates.
  const int batch = dqn_cfg.batch_size;
  Eigen::MatrixXd batch_obs(pipe.raw_dim, batch);
  Eigen::MatrixXd batch_next(pipe.raw_dim, batch);
  std::vector<int> batch_actions(static_cast<std::size_t>(batch));
  std::vector<double> batch_rewards(static_cast<std::size_t>(batch));
  std::vector<int> batch_costs(static_cast<std::size_t>(batch));
  std::vector<bool> batch_terminals(static_cast<std::size_t>(batch));

  for (long t = 1; t <= total_steps; ++t) {
    if (!episode_open) {
      state = envs::reset(suite, env_rng);
      traj = Trajectory{};
      raw_obs = envs::encode(suite, state, pipe.encode_opts);
      episode_open = true;
    }

    const double epsilon = epsilon_at(dqn_cfg, t);
    const int action = [&] {
      int a = select_action(qnet, pipe.augment_one(raw_obs), epsilon, explore_rng);
      return envs::maybe_slip(a, scheme.slip_prob, env_rng);
    }();

    envs::StepOutcome out = envs::step(suite, scheme, state, action);
    Eigen::VectorXd next_raw = envs::encode(suite, out.next, pipe.encode_opts);

    Transition tr{raw_obs, action,       out.reward,   out.cost,
                  next_raw, out.terminal, out.truncated};
    replay.push(tr);
    traj.transitions.push_back(std::move(tr));

    state = out.next;
    raw_obs = std::move(next_raw);

    if (out.terminal || out.truncated) {
      const auto& grid = suite.variants[static_cast<std::size_t>(state.variant_index)];
      traj.failed = out.terminal && out.cost == 1;
      traj.succeeded =
          out.terminal && grid.at(state.agent_pos.x, state.agent_pos.y) == envs::Cell::goal;

      if (s2c_model && !s2c_frozen) {
        s2c_buffer.ingest(traj, s2c::label_trajectory(traj, scfg.horizon));
      }
      if (v1_critic) v1_critic->ingest(traj);
      if (lagrangian) {
        lagrange = lagrange_update(lagrange, summarize(traj).episode_cost);
      }

      EpisodeMetrics m = summarize(traj);
      harness::EpisodeRow row;
      row.seed = seed;
      row.episode = episode_index++;
      row.env_step = t;
      row.episode_return = m.episode_return;
      row.length = m.length;
      row.cost = m.episode_cost;
      row.failed = m.failed;
      row.succeeded = m.succeeded;
      row.epsilon = epsilon;
      row.lambda = lagrangian ? lagrange.lambda : 0.0;
      row.has_s2c_loss = logs_s2c;
      row.s2c_loss = last_s2c_loss;
      result.log.rows.push_back(row);

      episode_open = false;
    }

    if (t % dqn_cfg.learn_every == 0 && replay.size() >= static_cast<std::size_t>(batch)) {
      for (int i = 0; i < batch; ++i) {
        const Transition& s =
            replay[static_cast<std::size_t>(agent_rng.uniform_int(static_cast<int>(replay.size())))];
        batch_obs.col(i) = s.obs;
        batch_next.col(i) = s.next_obs;
        batch_actions[static_cast<std::size_t>(i)] = s.action;
        batch_rewards[static_cast<std::size_t>(i)] = s.reward;
        batch_costs[static_cast<std::size_t>(i)] = s.cost;
        batch_terminals[static_cast<std::size_t>(i)] = s.terminal;
      }
      q_update(qnet, optimizer, qnet_target, pipe.augment_batch(batch_obs),
               pipe.augment_batch(batch_next), batch_actions, batch_rewards, batch_costs,
               batch_terminals, dqn_cfg.gamma, lagrangian ? lagrange.lambda : 0.0,
               dqn_cfg.huber_delta);
    }

    if (t % dqn_cfg.target_update_every == 0) {
      qnet_target = qnet;
      if (kind == AgentKind::v2_onpolicy) s2c_buffer.clear();
    }

    if (s2c_model && !s2c_frozen) {
      if (t % scfg.train_every == 0) {
        last_s2c_loss = s2c_model->train_round(s2c_buffer, s2c_rng);
      }
      if (t % scfg.snapshot_every == 0) s2c_model->snapshot();
    }
    if (v1_critic) {
      if (t % scfg.train_every == 0) last_s2c_loss = v1_critic->train_round(s2c_rng);
      if (t % scfg.snapshot_every == 0) v1_critic->snapshot();
    }

    if (kind == AgentKind::dqn_reset && t % dqn_cfg.reset_every == 0) {
      qnet = nn::make_mlp<double>(q_dims, nn::Head::linear, agent_rng);
      qnet_target = qnet;
      optimizer = nn::Adam<double>(qnet, {.learning_rate = dqn_cfg.learning_rate});
    }
  }

  result.qnet = std::move(qnet);
  result.s2c = std::move(s2c_model);
  result.final_lambda = lagrangian ? lagrange.lambda : 0.0;
  return result;
}

}  // namespace safegrid::agents
