#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>

#include "safegrid/nn/mlp.hpp"

namespace safegrid::nn {

inline constexpr int kCheckpointVersion = 1;

/// Versioned JSON form: {version, layer_dims, head, weights, biases} with
/// weights as nested row-major arrays. Doubles are emitted in shortest
/// round-trip form, so save -> load reproduces parameters bitwise.
nlohmann::json to_json(const Mlp<double>& net);
Mlp<double> mlp_from_json(const nlohmann::json& j);

void save_mlp(const Mlp<double>& net, const std::filesystem::path& path);
Mlp<double> load_mlp(const std::filesystem::path& path);

}  // namespace safegrid::nn
