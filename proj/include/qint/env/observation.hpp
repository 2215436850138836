#pragma once

#include <deque>
#include <vector>

#include "qint/env/mini_invaders.hpp"

namespace qint::env {

/// Length of one feature frame for a given config. Column features are indexed
/// relative to the player: slot grid_width - 1 is the player's own column.
///   grid_width       player position, one-hot
///   2*grid_width-1   per column, height of the lowest alive alien (0 if none)
///   2*grid_width-1   per column, height of the lowest bomb (0 if none)
///   3                bullet active, relative x, y
///   2                bonus ship active, relative x
///   2                swarm offset, swarm direction (1 = right)
///   1                lives left / lives
/// Every component lies in [0, 1].
int frame_size(const EnvConfig& config);

std::vector<double> encode_frame(const EnvConfig& config, const GameState& state);

/// The K most recent frames, oldest first.
class ObservationStack {
 public:
  explicit ObservationStack(int depth = 4);

  int depth() const { return depth_; }
  bool empty() const { return frames_.empty(); }
  const std::deque<std::vector<double>>& frames() const { return frames_; }

  /// Appends a frame and drops the oldest. On a fresh stack the frame is
  /// repeated to fill all K slots.
  void push(std::vector<double> frame);

  /// Frames concatenated oldest to newest.
  std::vector<double> flatten() const;

  bool operator==(const ObservationStack&) const = default;

 private:
  int depth_;
  std::deque<std::vector<double>> frames_;
};

/// Returns `history` with the frame for `state` appended.
ObservationStack observe(const EnvConfig& config, const GameState& state, ObservationStack history);

}  // namespace qint::env
