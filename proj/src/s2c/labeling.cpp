#include "safegrid/s2c/labeling.hpp"

#include <algorithm>
#include <stdexcept>

#include "safegrid/s2c/config.hpp"

namespace safegrid::s2c {

int bin_index(int delta, int bin_width, int horizon) {
  if (delta < 1 || delta > horizon) {
    throw std::invalid_argument("bin_index: delta out of [1, horizon]");
  }
  return (delta - 1) / bin_width;  // == ceil(delta / w) - 1 for delta >= 1
}

int SafetyConfig::bin_of(int delta) const {
  if (dedicated_safe_bin && delta == horizon) return bins() - 1;
  return bin_index(delta, bin_width, horizon);
}

std::vector<SafetyLabel> label_trajectory(const Trajectory& traj, int horizon) {
  if (!traj.complete()) {
    throw std::logic_error("label_trajectory: trajectory is not complete");
  }
  if (horizon < 1) throw std::invalid_argument("label_trajectory: horizon must be positive");

  const int n = static_cast<int>(traj.transitions.size());
  std::vector<SafetyLabel> labels(static_cast<std::size_t>(n));
  if (traj.failed) {
    // The failure is entered by the action taken at index n - 1.
    for (int t = 0; t < n; ++t) {
      labels[static_cast<std::size_t>(t)].delta = std::min(n - t, horizon);
    }
  } else {
    for (int t = 0; t < n; ++t) {
      labels[static_cast<std::size_t>(t)].delta = horizon;
    }
  }
  return labels;
}

}  // namespace safegrid::s2c
