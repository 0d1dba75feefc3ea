#pragma once

#include <algorithm>

namespace safegrid::agents {

/// Dual state for the cost constraint: lambda rises while the running
/// episodic-cost estimate exceeds the budget and decays (clamped at zero)
/// once it falls below.
struct LagrangeState {
  double lambda = 0.0;
  double eta = 0.05;       // dual learning rate
  double budget = 0.05;    // beta
  double cost_estimate = 0.0;
  double decay = 0.99;     // exponential-average factor for the estimate
};

inline LagrangeState lagrange_update(LagrangeState state, double episode_cost) {
  state.cost_estimate = state.decay * state.cost_estimate + (1.0 - state.decay) * episode_cost;
  state.lambda = std::max(0.0, state.lambda + state.eta * (state.cost_estimate - state.budget));
  return state;
}

}  // namespace safegrid::agents
