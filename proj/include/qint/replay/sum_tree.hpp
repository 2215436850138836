#pragma once

#include <cstddef>
#include <vector>

namespace qint::replay {

/// Array-backed binary tree over `capacity` non-negative leaf priorities.
/// Node 1 is the root; node i has children 2i and 2i + 1; leaves start at
/// the first power of two >= capacity. Padding leaves stay at zero.
class SumTree {
 public:
  explicit SumTree(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  double total() const { return nodes_[1]; }
  double get(std::size_t leaf) const;

  /// Throws std::invalid_argument for a negative/non-finite priority or an
  /// out-of-range leaf.
  void set(std::size_t leaf, double priority);

  /// Leaf whose cumulative interval [prefix, prefix + p) contains u. Throws
  /// StateError when the total mass is zero.
  std::size_t sample(double u) const;

  /// Largest |node - (left + right)| over internal nodes.
  double max_internal_error() const;

 private:
  std::size_t capacity_;
  std::size_t base_;
  std::vector<double> nodes_;
};

}  // namespace qint::replay
