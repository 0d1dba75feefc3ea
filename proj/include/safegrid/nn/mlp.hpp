#pragma once

#include <Eigen/Core>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "safegrid/core/rng.hpp"

namespace safegrid::nn {

enum class Head { linear, softmax };

/// Fully connected ReLU stack with a linear or softmax output head.
/// weights[l] has shape dims[l+1] x dims[l]; samples are matrix columns.
template <typename Scalar>
struct Mlp {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<int> dims;
  std::vector<Mat> weights;
  std::vector<Vec> biases;
  Head head = Head::linear;

  int input_size() const { return dims.front(); }
  int output_size() const { return dims.back(); }
  std::size_t layer_count() const { return weights.size(); }
};

/// Per-layer parameter gradients (or any parameter-shaped accumulator).
template <typename Scalar>
struct Gradients {
  std::vector<typename Mlp<Scalar>::Mat> weights;
  std::vector<typename Mlp<Scalar>::Vec> biases;
};

/// Layer inputs and pre-activations recorded by a forward pass, consumed by
/// backward().
template <typename Scalar>
struct Trace {
  std::vector<typename Mlp<Scalar>::Mat> inputs;  // input to each layer
  std::vector<typename Mlp<Scalar>::Mat> pre;     // affine outputs before ReLU
};

/// Uniform init in [-a, a] with a = sqrt(6 / (fan_in + fan_out)).
template <typename Scalar>
Mlp<Scalar> make_mlp(std::span<const int> dims, Head head, Rng& rng) {
  if (dims.size() < 2) throw std::invalid_argument("mlp: need at least two dims");
  Mlp<Scalar> net;
  net.dims.assign(dims.begin(), dims.end());
  net.head = head;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l];
    const int fan_out = dims[l + 1];
    if (fan_in <= 0 || fan_out <= 0) throw std::invalid_argument("mlp: dims must be positive");
    const double a = std::sqrt(6.0 / (fan_in + fan_out));
    typename Mlp<Scalar>::Mat w(fan_out, fan_in);
    for (int i = 0; i < fan_out; ++i) {
      for (int j = 0; j < fan_in; ++j) {
        w(i, j) = static_cast<Scalar>(rng.uniform_real(-a, a));
      }
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(Mlp<Scalar>::Vec::Zero(fan_out));
  }
  return net;
}

template <typename Scalar>
Gradients<Scalar> zero_gradients(const Mlp<Scalar>& net) {
  Gradients<Scalar> g;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    g.weights.push_back(Mlp<Scalar>::Mat::Zero(net.weights[l].rows(), net.weights[l].cols()));
    g.biases.push_back(Mlp<Scalar>::Vec::Zero(net.biases[l].size()));
  }
  return g;
}

/// Column-wise softmax with max subtraction.
template <typename Scalar>
void softmax_inplace(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& z) {
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    auto col = z.col(c);
    col.array() -= col.maxCoeff();
    col = col.array().exp();
    col /= col.sum();
  }
}

/// Forward pass over a batch (columns are samples). When trace is non-null
/// the layer inputs and pre-activations are recorded for backward().
template <typename Scalar>
typename Mlp<Scalar>::Mat forward(const Mlp<Scalar>& net,
                                  const typename Mlp<Scalar>::Mat& input,
                                  Trace<Scalar>* trace = nullptr) {
  if (input.rows() != net.input_size()) {
    throw std::invalid_argument("mlp forward: input has " + std::to_string(input.rows()) +
                                " rows, expected " + std::to_string(net.input_size()));
  }
  if (trace) {
    trace->inputs.clear();
    trace->pre.clear();
  }
  typename Mlp<Scalar>::Mat a = input;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    if (trace) trace->inputs.push_back(a);
    typename Mlp<Scalar>::Mat z = (net.weights[l] * a).colwise() + net.biases[l];
    if (trace) trace->pre.push_back(z);
    if (l + 1 < net.layer_count()) {
      a = z.cwiseMax(Scalar(0));
    } else {
      a = std::move(z);
    }
  }
  if (net.head == Head::softmax) softmax_inplace<Scalar>(a);
  return a;
}

/// Single-sample forward.
template <typename Scalar>
typename Mlp<Scalar>::Vec forward(const Mlp<Scalar>& net, const typename Mlp<Scalar>::Vec& input) {
  typename Mlp<Scalar>::Mat out = forward<Scalar>(net, typename Mlp<Scalar>::Mat(input));
  return out.col(0);
}

/// Reverse-mode gradients through the affine/ReLU stack. `out_grad` is the
/// loss gradient with respect to the final affine output, i.e. the logits
/// for a softmax head (nll_loss supplies exactly that) or the raw outputs
/// for a linear head.
template <typename Scalar>
Gradients<Scalar> backward(const Mlp<Scalar>& net, const Trace<Scalar>& trace,
                           const typename Mlp<Scalar>::Mat& out_grad) {
  if (trace.inputs.size() != net.layer_count()) {
    throw std::invalid_argument("mlp backward: trace does not match network");
  }
  if (out_grad.rows() != net.output_size() || out_grad.cols() != trace.inputs.front().cols()) {
    throw std::invalid_argument("mlp backward: out_grad shape mismatch");
  }
  Gradients<Scalar> grads;
  grads.weights.resize(net.layer_count());
  grads.biases.resize(net.layer_count());

  typename Mlp<Scalar>::Mat delta = out_grad;
  for (std::size_t l = net.layer_count(); l-- > 0;) {
    grads.weights[l].noalias() = delta * trace.inputs[l].transpose();
    grads.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      typename Mlp<Scalar>::Mat back = net.weights[l].transpose() * delta;
      delta = back.cwiseProduct(
          (trace.pre[l - 1].array() > Scalar(0)).template cast<Scalar>().matrix());
    }
  }
  return grads;
}

}  // namespace safegrid::nn
