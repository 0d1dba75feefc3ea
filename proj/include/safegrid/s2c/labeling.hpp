#pragma once

#include <vector>

#include "safegrid/core/types.hpp"

namespace safegrid::s2c {

/// Steps-to-cost label for one visited state; delta in [1, horizon].
struct SafetyLabel {
  int delta = 0;
};

/// Labels every visited state of a completed trajectory with its
/// steps-to-cost value. For a failing trajectory the state at index t gets
/// min(t_f - t, horizon), where t_f is the number of actions taken; states
/// further than the horizon from the failure are clipped to horizon. For a
/// trajectory that never fails (goal or truncation) every label is horizon.
/// The unsafe state itself is never labeled.
std::vector<SafetyLabel> label_trajectory(const Trajectory& traj, int horizon);

}  // namespace safegrid::s2c
