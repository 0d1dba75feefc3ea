#pragma once

#include <cstdint>
#include <optional>

#include "safegrid/agents/dqn.hpp"
#include "safegrid/agents/lagrange.hpp"
#include "safegrid/envs/island.hpp"
#include "safegrid/harness/metrics.hpp"
#include "safegrid/nn/mlp.hpp"
#include "safegrid/s2c/model.hpp"

namespace safegrid::agents {

/// Pre-trained components carried into a run. A frozen steps-to-cost model
/// is never trained or re-snapshotted, so its parameters stay bitwise intact
/// for the whole run.
struct TransferSetup {
  std::optional<s2c::S2cModel> s2c_init;
  bool freeze_s2c = false;
  std::optional<nn::Mlp<double>> policy_init;
};

/// Diagnostic hooks used by equivalence tests: appends pad_width constant
/// features (pad_value) to every observation fed to the Q-network.
struct TrainHooks {
  int pad_width = 0;
  double pad_value = 0.0;
};

struct TrainResult {
  harness::MetricsLog log;
  nn::Mlp<double> qnet;
  std::optional<s2c::S2cModel> s2c;
  double final_lambda = 0.0;
};

/// Runs one agent for total_steps environment steps, interleaving rollout,
/// replay updates, target syncs, safety-model rounds/snapshots, Lagrange
/// updates, and parameter resets according to the agent kind. The master
/// seed splits into independent env / agent / safety / exploration streams,
/// so toggling the safety model never perturbs the environment stream.
TrainResult train_agent(AgentKind kind, const envs::IslandSuite& suite,
                        const envs::RewardScheme& scheme, const DqnConfig& dqn_cfg,
                        const s2c::SafetyConfig& safety_cfg, std::uint64_t seed, long total_steps,
                        const TransferSetup* transfer = nullptr, const TrainHooks* hooks = nullptr);

}  // namespace safegrid::agents
