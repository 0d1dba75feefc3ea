#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace safegrid::nn {

template <typename Scalar>
struct NllResult {
  Scalar loss;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> grad_logits;  // probs - one_hot(target)
  bool clamped = false;  // probability at the target hit the log floor
};

/// Negative log-likelihood of a categorical prediction against an index
/// target. The gradient is taken with respect to the pre-softmax logits.
/// A zero probability at the target is clamped to 1e-12 and flagged.
template <typename Scalar>
NllResult<Scalar> nll_loss(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& pred_dist,
                           int target_bin) {
  if (target_bin < 0 || target_bin >= pred_dist.size()) {
    throw std::invalid_argument("nll_loss: target bin out of range");
  }
  if (std::abs(static_cast<double>(pred_dist.sum()) - 1.0) > 1e-6) {
    throw std::invalid_argument("nll_loss: prediction does not sum to 1");
  }
  NllResult<Scalar> r;
  const Scalar floor = Scalar(1e-12);
  Scalar p = pred_dist[target_bin];
  r.clamped = p < floor;
  r.loss = -std::log(std::max(p, floor));
  r.grad_logits = pred_dist;
  r.grad_logits[target_bin] -= Scalar(1);
  return r;
}

template <typename Scalar>
struct ScalarLoss {
  Scalar loss;
  Scalar grad;
};

/// Huber loss on a scalar prediction; the gradient is clipped at +-delta.
template <typename Scalar>
ScalarLoss<Scalar> huber_loss(Scalar pred, Scalar target, Scalar delta) {
  if (delta <= Scalar(0)) throw std::invalid_argument("huber_loss: delta must be positive");
  const Scalar err = pred - target;
  ScalarLoss<Scalar> r;
  if (std::abs(err) <= delta) {
    r.loss = Scalar(0.5) * err * err;
    r.grad = err;
  } else {
    r.loss = delta * (std::abs(err) - Scalar(0.5) * delta);
    r.grad = err > Scalar(0) ? delta : -delta;
  }
  return r;
}

/// Numerically stable binary cross-entropy on a logit.
template <typename Scalar>
ScalarLoss<Scalar> bce_with_logits(Scalar logit, Scalar target) {
  ScalarLoss<Scalar> r;
  r.loss = std::max(logit, Scalar(0)) - logit * target + std::log1p(std::exp(-std::abs(logit)));
  r.grad = Scalar(1) / (Scalar(1) + std::exp(-logit)) - target;
  return r;
}

}  // namespace safegrid::nn
