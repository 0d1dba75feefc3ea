#include "safegrid/s2c/buffer.hpp"

#include <stdexcept>

namespace safegrid::s2c {

S2cBuffer::S2cBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("s2c buffer: capacity must be positive");
}

void S2cBuffer::push(Eigen::VectorXd obs, SafetyLabel label) {
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.push_back({std::move(obs), label});
}

void S2cBuffer::ingest(const Trajectory& traj, const std::vector<SafetyLabel>& labels) {
  if (labels.size() != traj.transitions.size()) {
    throw std::invalid_argument("s2c buffer: labels do not align with trajectory");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    push(traj.transitions[i].obs, labels[i]);
  }
}

}  // namespace safegrid::s2c
