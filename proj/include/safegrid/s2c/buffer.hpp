#pragma once

#include <Eigen/Core>
#include <deque>
#include <utility>
#include <vector>

#include "safegrid/core/types.hpp"
#include "safegrid/s2c/labeling.hpp"

namespace safegrid::s2c {

/// FIFO store of (observation, steps-to-cost label) pairs. When full, the
/// oldest entries are evicted so the data tracks recent policies.
class S2cBuffer {
 public:
  struct Entry {
    Eigen::VectorXd obs;
    SafetyLabel label;
  };

  explicit S2cBuffer(std::size_t capacity);

  void push(Eigen::VectorXd obs, SafetyLabel label);

  /// Appends one pair per visited state, in trajectory order. labels must
  /// align 1:1 with the trajectory's transitions.
  void ingest(const Trajectory& traj, const std::vector<SafetyLabel>& labels);

  void clear() { entries_.clear(); }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Entry& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::deque<Entry> entries_;
  std::size_t capacity_;
};

}  // namespace safegrid::s2c
