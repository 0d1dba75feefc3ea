#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace safegrid::s2c {

/// Hyperparameters of the steps-to-cost representation. The horizon bounds
/// the lookahead; labels live in [1, horizon] and are grouped into bins of
/// bin_width. The sentinel label `delta == horizon` ("safe within the
/// horizon") shares the last bin unless dedicated_safe_bin adds one output
/// for it.
struct SafetyConfig {
  int horizon = 40;
  int bin_width = 4;
  int buffer_capacity = 50000;
  int batch_size = 512;
  int train_every = 500;        // env steps between update rounds
  int updates_per_round = 50;
  int snapshot_every = 2000;    // env steps between frozen-net refreshes
  double learning_rate = 1e-3;
  bool dedicated_safe_bin = false;
  std::vector<int> hidden_dims = {64, 64};

  int bins() const { return horizon / bin_width + (dedicated_safe_bin ? 1 : 0); }

  void validate(int episode_horizon = 0) const {
    if (horizon <= 0) throw std::invalid_argument("safety: horizon must be positive");
    if (bin_width <= 0) throw std::invalid_argument("safety: bin_width must be positive");
    if (horizon % bin_width != 0) {
      throw std::invalid_argument("safety: bin_width " + std::to_string(bin_width) +
                                  " does not divide horizon " + std::to_string(horizon));
    }
    if (horizon / bin_width < 2) throw std::invalid_argument("safety: need at least 2 bins");
    if (episode_horizon > 0 && horizon > episode_horizon) {
      throw std::invalid_argument("safety: horizon exceeds the episode step limit");
    }
    if (buffer_capacity <= 0 || batch_size <= 0 || train_every <= 0 || updates_per_round <= 0 ||
        snapshot_every <= 0) {
      throw std::invalid_argument("safety: cadence fields must be positive");
    }
  }

  /// Bin for a label, honoring the dedicated safe bin when enabled.
  int bin_of(int delta) const;
};

/// Maps a steps-to-cost label to its bin: ceil(delta / w) - 1. The safe
/// sentinel delta == horizon lands in the last bin.
int bin_index(int delta, int bin_width, int horizon);

}  // namespace safegrid::s2c
