#pragma once

#include <filesystem>

#include "safegrid/agents/dqn.hpp"

namespace safegrid::agents {

/// Q-network checkpoint: the shared net format plus an agent-kind header.
void save_qnet(const nn::Mlp<double>& net, AgentKind kind, const std::filesystem::path& path);

struct LoadedQnet {
  nn::Mlp<double> net;
  AgentKind kind;
};

LoadedQnet load_qnet(const std::filesystem::path& path);

}  // namespace safegrid::agents
