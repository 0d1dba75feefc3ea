#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "safegrid/nn/mlp.hpp"

namespace safegrid::nn {

struct GradCheckReport {
  double max_rel_error = 0.0;
  int worst_layer = -1;
  bool worst_is_bias = false;
  Eigen::Index worst_row = 0;
  Eigen::Index worst_col = 0;
  std::vector<double> per_layer;  // worst relative error per layer

  std::string describe() const {
    return "layer " + std::to_string(worst_layer) + (worst_is_bias ? " bias[" : " weight[") +
           std::to_string(worst_row) +
           (worst_is_bias ? "]" : "," + std::to_string(worst_col) + "]") +
           " rel_err=" + std::to_string(max_rel_error);
  }
};

/// Pushes hidden pre-activations at least `margin` away from zero by
/// adjusting biases, so finite differences never straddle a ReLU kink.
template <typename Scalar>
void nudge_preactivations(Mlp<Scalar>& net, const typename Mlp<Scalar>::Vec& input,
                          Scalar margin = Scalar(1e-3)) {
  Trace<Scalar> trace;
  forward<Scalar>(net, typename Mlp<Scalar>::Mat(input), &trace);
  for (std::size_t l = 0; l + 1 < net.layer_count(); ++l) {
    for (Eigen::Index i = 0; i < trace.pre[l].rows(); ++i) {
      const Scalar z = trace.pre[l](i, 0);
      if (std::abs(z) < margin) {
        net.biases[l][i] += (z >= Scalar(0) ? margin - z : -margin - z);
      }
    }
    // Recompute downstream pre-activations with the adjusted biases.
    forward<Scalar>(net, typename Mlp<Scalar>::Mat(input), &trace);
  }
}

/// Compares backward() against central finite differences for every
/// parameter. `loss_fn` maps the network output (one column) to the scalar
/// loss and its gradient with respect to the final affine output. Intended
/// for nets small enough to perturb exhaustively.
template <typename Scalar, typename LossFn>
GradCheckReport grad_check(Mlp<Scalar>& net, LossFn loss_fn,
                           const typename Mlp<Scalar>::Vec& input, double h = 1e-5) {
  using Mat = typename Mlp<Scalar>::Mat;

  Trace<Scalar> trace;
  Mat out = forward<Scalar>(net, Mat(input), &trace);
  auto [loss0, out_grad] = loss_fn(out.col(0));
  (void)loss0;
  Gradients<Scalar> analytic = backward<Scalar>(net, trace, Mat(out_grad));

  GradCheckReport report;
  report.per_layer.assign(net.layer_count(), 0.0);

  auto numeric_grad = [&](Scalar& param) {
    const Scalar saved = param;
    param = saved + static_cast<Scalar>(h);
    auto [lp, gp] = loss_fn(forward<Scalar>(net, Mat(input)).col(0));
    (void)gp;
    param = saved - static_cast<Scalar>(h);
    auto [lm, gm] = loss_fn(forward<Scalar>(net, Mat(input)).col(0));
    (void)gm;
    param = saved;
    return (static_cast<double>(lp) - static_cast<double>(lm)) / (2.0 * h);
  };
  auto record = [&](double exact, double numeric, std::size_t layer, bool is_bias,
                    Eigen::Index row, Eigen::Index col) {
    const double rel =
        std::abs(exact - numeric) / std::max({std::abs(exact), std::abs(numeric), 1e-6});
    report.per_layer[layer] = std::max(report.per_layer[layer], rel);
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_layer = static_cast<int>(layer);
      report.worst_is_bias = is_bias;
      report.worst_row = row;
      report.worst_col = col;
    }
  };

  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    for (Eigen::Index i = 0; i < net.weights[l].rows(); ++i) {
      for (Eigen::Index j = 0; j < net.weights[l].cols(); ++j) {
        record(static_cast<double>(analytic.weights[l](i, j)), numeric_grad(net.weights[l](i, j)),
               l, false, i, j);
      }
    }
    for (Eigen::Index i = 0; i < net.biases[l].size(); ++i) {
      record(static_cast<double>(analytic.biases[l][i]), numeric_grad(net.biases[l][i]), l, true,
             i, 0);
    }
  }
  return report;
}

}  // namespace safegrid::nn
