#include "qint/env/observation.hpp"

#include <stdexcept>

namespace qint::env {

int frame_size(const EnvConfig& config) { return 5 * config.grid_width + 6; }

std::vector<double> encode_frame(const EnvConfig& config, const GameState& state) {
  const int width = config.grid_width;
  const double rel_scale = width > 1 ? 1.0 / (2 * width - 2) : 0.0;
  const double y_scale = 1.0 / (config.grid_height - 1);

  std::vector<double> frame(static_cast<std::size_t>(frame_size(config)), 0.0);
  const int span = 2 * width - 1;
  const int centre = width - 1 - state.player_col;  // relative column index of grid column 0
  auto player = frame.begin();
  auto aliens = player + width;
  auto bombs = aliens + span;
  auto tail = bombs + span;

  player[state.player_col] = 1.0;

  for (int c = 0; c < state.swarm_cols; ++c) {
    for (int r = state.swarm_rows - 1; r >= 0; --r) {
      if (state.alien_alive(r, c)) {
        aliens[centre + state.swarm_x + c] = (state.swarm_y + r) * y_scale;
        break;
      }
    }
  }

  for (const Cell& bomb : state.bombs) {
    const double h = bomb.y * y_scale;
    if (h > bombs[centre + bomb.x]) bombs[centre + bomb.x] = h;
  }

  if (state.player_bullet) {
    tail[0] = 1.0;
    tail[1] = (centre + state.player_bullet->x) * rel_scale;
    tail[2] = state.player_bullet->y * y_scale;
  }
  if (state.bonus_col) {
    tail[3] = 1.0;
    tail[4] = (centre + *state.bonus_col) * rel_scale;
  }
  const int travel = width - state.swarm_cols;
  tail[5] = travel > 0 ? static_cast<double>(state.swarm_x) / travel : 0.0;
  tail[6] = state.swarm_direction > 0 ? 1.0 : 0.0;
  tail[7] = static_cast<double>(state.lives_left) / config.lives;
  return frame;
}

ObservationStack::ObservationStack(int depth) : depth_(depth) {
  if (depth < 1) throw std::invalid_argument("observation stack depth must be >= 1");
}

void ObservationStack::push(std::vector<double> frame) {
  if (frames_.empty()) {
    frames_.assign(static_cast<std::size_t>(depth_), frame);
    return;
  }
  frames_.pop_front();
  frames_.push_back(std::move(frame));
}

std::vector<double> ObservationStack::flatten() const {
  std::vector<double> flat;
  if (frames_.empty()) return flat;
  flat.reserve(frames_.size() * frames_.front().size());
  for (const auto& f : frames_) flat.insert(flat.end(), f.begin(), f.end());
  return flat;
}

ObservationStack observe(const EnvConfig& config, const GameState& state, ObservationStack history) {
  history.push(encode_frame(config, state));
  return history;
}

}  // namespace qint::env
