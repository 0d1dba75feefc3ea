#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "safegrid/nn/mlp.hpp"

namespace safegrid::nn {

template <typename Scalar>
struct AdamConfig {
  Scalar learning_rate = Scalar(1e-3);
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar epsilon = Scalar(1e-8);
};

/// Bias-corrected adaptive-moment optimizer over an Mlp's parameters.
template <typename Scalar>
class Adam {
 public:
  Adam() = default;
  Adam(const Mlp<Scalar>& net, AdamConfig<Scalar> cfg)
      : cfg_(cfg), m_(zero_gradients(net)), v_(zero_gradients(net)) {}

  long step_count() const { return step_count_; }
  const AdamConfig<Scalar>& config() const { return cfg_; }

  /// One update. Throws on non-finite gradients, naming the location.
  void step(Mlp<Scalar>& net, const Gradients<Scalar>& grads) {
    if (grads.weights.size() != net.layer_count()) {
      throw std::invalid_argument("adam: gradient shape mismatch");
    }
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      if (!grads.weights[l].allFinite()) {
        throw std::runtime_error("adam: non-finite gradient in layer " + std::to_string(l) +
                                 " weights");
      }
      if (!grads.biases[l].allFinite()) {
        throw std::runtime_error("adam: non-finite gradient in layer " + std::to_string(l) +
                                 " biases");
      }
    }
    ++step_count_;
    const Scalar c1 = Scalar(1) - std::pow(cfg_.beta1, Scalar(step_count_));
    const Scalar c2 = Scalar(1) - std::pow(cfg_.beta2, Scalar(step_count_));
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      update(net.weights[l], grads.weights[l], m_.weights[l], v_.weights[l], c1, c2);
      update(net.biases[l], grads.biases[l], m_.biases[l], v_.biases[l], c1, c2);
    }
  }

 private:
  template <typename Param>
  void update(Param& p, const Param& g, Param& m, Param& v, Scalar c1, Scalar c2) {
    m = cfg_.beta1 * m + (Scalar(1) - cfg_.beta1) * g;
    v = cfg_.beta2 * v.array().matrix() + (Scalar(1) - cfg_.beta2) * g.array().square().matrix();
    p.array() -=
        cfg_.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg_.epsilon);
  }

  AdamConfig<Scalar> cfg_;
  Gradients<Scalar> m_;
  Gradients<Scalar> v_;
  long step_count_ = 0;
};

}  // namespace safegrid::nn
