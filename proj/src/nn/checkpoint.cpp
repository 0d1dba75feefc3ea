#include "safegrid/nn/checkpoint.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace safegrid::nn {

nlohmann::json to_json(const Mlp<double>& net) {
  nlohmann::json j;
  j["version"] = kCheckpointVersion;
  j["layer_dims"] = net.dims;
  j["head"] = net.head == Head::softmax ? "softmax" : "linear";
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    nlohmann::json w = nlohmann::json::array();
    for (Eigen::Index i = 0; i < net.weights[l].rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < net.weights[l].cols(); ++k) row.push_back(net.weights[l](i, k));
      w.push_back(std::move(row));
    }
    weights.push_back(std::move(w));
    nlohmann::json b = nlohmann::json::array();
    for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) b.push_back(net.biases[l][i]);
    biases.push_back(std::move(b));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  return j;
}

Mlp<double> mlp_from_json(const nlohmann::json& j) {
  if (!j.contains("version") || j["version"].get<int>() != kCheckpointVersion) {
    throw std::invalid_argument("checkpoint: unsupported version");
  }
  Mlp<double> net;
  net.dims = j.at("layer_dims").get<std::vector<int>>();
  if (net.dims.size() < 2) throw std::invalid_argument("checkpoint: bad layer_dims");
  const std::string head = j.at("head").get<std::string>();
  if (head == "softmax") {
    net.head = Head::softmax;
  } else if (head == "linear") {
    net.head = Head::linear;
  } else {
    throw std::invalid_argument("checkpoint: unknown head '" + head + "'");
  }
  const auto& weights = j.at("weights");
  const auto& biases = j.at("biases");
  if (weights.size() != net.dims.size() - 1 || biases.size() != net.dims.size() - 1) {
    throw std::invalid_argument("checkpoint: layer count mismatch");
  }
  for (std::size_t l = 0; l + 1 < net.dims.size(); ++l) {
    const int rows = net.dims[l + 1];
    const int cols = net.dims[l];
    if (static_cast<int>(weights[l].size()) != rows) {
      throw std::invalid_argument("checkpoint: weight rows mismatch in layer " + std::to_string(l));
    }
    Mlp<double>::Mat w(rows, cols);
    for (int i = 0; i < rows; ++i) {
      if (static_cast<int>(weights[l][i].size()) != cols) {
        throw std::invalid_argument("checkpoint: weight cols mismatch in layer " +
                                    std::to_string(l));
      }
      for (int k = 0; k < cols; ++k) w(i, k) = weights[l][i][k].get<double>();
    }
    if (static_cast<int>(biases[l].size()) != rows) {
      throw std::invalid_argument("checkpoint: bias size mismatch in layer " + std::to_string(l));
    }
    Mlp<double>::Vec b(rows);
    for (int i = 0; i < rows; ++i) b[i] = biases[l][i].get<double>();
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

void save_mlp(const Mlp<double>& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path.string());
  out << to_json(net).dump(2) << '\n';
}

Mlp<double> load_mlp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  return mlp_from_json(j);
}

}  // namespace safegrid::nn
