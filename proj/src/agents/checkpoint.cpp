#include "safegrid/agents/checkpoint.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "safegrid/nn/checkpoint.hpp"

namespace safegrid::agents {

void save_qnet(const nn::Mlp<double>& net, AgentKind kind, const std::filesystem::path& path) {
  nlohmann::json j;
  j["version"] = nn::kCheckpointVersion;
  j["type"] = "qnet";
  j["kind"] = to_string(kind);
  j["net"] = nn::to_json(net);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("qnet save: cannot write " + path.string());
  out << j.dump(2) << '\n';
}

LoadedQnet load_qnet(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("qnet load: cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  if (j.value("type", "") != "qnet") {
    throw std::invalid_argument("qnet load: not a q-network checkpoint");
  }
  return {nn::mlp_from_json(j.at("net")), agent_kind_from_string(j.at("kind").get<std::string>())};
}

}  // namespace safegrid::agents
