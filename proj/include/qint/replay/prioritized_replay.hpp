#pragma once

#include <cstddef>
#include <vector>

#include "qint/core/rng.hpp"
#include "qint/replay/sum_tree.hpp"
#include "qint/replay/transition.hpp"

namespace qint::replay {

struct ReplayConfig {
  std::size_t capacity = 100000;
  double alpha = 0.5;
  double beta_start = 0.4;
  double beta_end = 1.0;
  double eps_priority = 1e-6;
  bool stratified = true;  // one draw per equal-mass segment; false = independent draws

  void validate() const;
  bool operator==(const ReplayConfig&) const = default;
};

struct SampledBatch {
  std::vector<std::size_t> indices;
  std::vector<Transition> transitions;
  std::vector<double> weights;  // importance-sampling weights, max = 1
};

/// Proportional prioritized replay over a sum tree. Slots are overwritten
/// FIFO once the buffer is full.
class PrioritizedReplay {
 public:
  explicit PrioritizedReplay(ReplayConfig config);

  const ReplayConfig& config() const { return config_; }
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return config_.capacity; }
  double max_priority() const { return max_priority_; }
  double priority(std::size_t slot) const { return tree_.get(slot); }
  const SumTree& tree() const { return tree_; }
  const Transition& at(std::size_t slot) const;

  /// Stores `t` at the write cursor with the running max priority. Returns the slot.
  std::size_t add(Transition t);

  /// Draws `batch` slots with probability p_j / sum p and returns the
  /// normalized weights (size * P(j))^-beta / max. Throws StateError when
  /// fewer than `batch` transitions are stored.
  SampledBatch sample(std::size_t batch, double beta, Rng& rng) const;

  /// priority_j = (|td_j| + eps)^alpha. Throws std::invalid_argument on a bad index.
  void update(const std::vector<std::size_t>& indices, const std::vector<double>& td_errors);

 private:
  ReplayConfig config_;
  SumTree tree_;
  std::vector<Transition> storage_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
  double max_priority_ = 1.0;
};

}  // namespace qint::replay
