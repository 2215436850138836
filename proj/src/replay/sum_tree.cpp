#include "qint/replay/sum_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qint/core/errors.hpp"

namespace qint::replay {

SumTree::SumTree(std::size_t capacity) : capacity_(capacity), base_(1) {
  if (capacity == 0) throw std::invalid_argument("sum tree capacity must be >= 1");
  while (base_ < capacity) base_ <<= 1;
  nodes_.assign(2 * base_, 0.0);
}

double SumTree::get(std::size_t leaf) const {
  if (leaf >= capacity_) throw std::invalid_argument("sum tree leaf out of range");
  return nodes_[base_ + leaf];
}

void SumTree::set(std::size_t leaf, double priority) {
  if (leaf >= capacity_) {
    throw std::invalid_argument("sum tree leaf " + std::to_string(leaf) + " out of range");
  }
  if (!(priority >= 0.0) || !std::isfinite(priority)) {
    throw std::invalid_argument("sum tree priority must be finite and >= 0");
  }
  std::size_t i = base_ + leaf;
  nodes_[i] = priority;
  // Recompute rather than add the delta so parents stay exact sums.
  for (i >>= 1; i >= 1; i >>= 1) nodes_[i] = nodes_[2 * i] + nodes_[2 * i + 1];
}

std::size_t SumTree::sample(double u) const {
  if (!(total() > 0.0)) throw StateError("cannot sample from a sum tree with zero total priority");
  u = std::max(u, 0.0);
  std::size_t i = 1;
  while (i < base_) {
    const std::size_t left = 2 * i;
    if (u < nodes_[left] || nodes_[left + 1] <= 0.0) {
      i = left;
    } else {
      u -= nodes_[left];
      i = left + 1;
    }
  }
  return i - base_;
}

double SumTree::max_internal_error() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < base_; ++i) {
    worst = std::max(worst, std::abs(nodes_[i] - (nodes_[2 * i] + nodes_[2 * i + 1])));
  }
  return worst;
}

}  // namespace qint::replay
