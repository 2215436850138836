#include "qint/env/mini_invaders.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qint/core/errors.hpp"

namespace qint::env {

namespace {

constexpr std::uint64_t kBonusStream = 0x10000;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool fires(int action) {
  return action == static_cast<int>(Action::fire) || action == static_cast<int>(Action::right_fire) ||
         action == static_cast<int>(Action::left_fire);
}

int horizontal(int action) {
  switch (static_cast<Action>(action)) {
    case Action::right:
    case Action::right_fire:
      return 1;
    case Action::left:
    case Action::left_fire:
      return -1;
    default:
      return 0;
  }
}

}  // namespace

std::string_view action_name(int action) {
  static constexpr std::array<std::string_view, kActionCount> names = {
      "NOOP", "FIRE", "RIGHT", "LEFT", "RIGHTFIRE", "LEFTFIRE"};
  if (action < 0 || action >= kActionCount) {
    throw std::invalid_argument("action index out of range: " + std::to_string(action));
  }
  return names[static_cast<std::size_t>(action)];
}

void EnvConfig::validate() const {
  if (swarm_rows < 1 || swarm_cols < 1) throw ConfigError("swarm dimensions must be >= 1");
  if (grid_width < swarm_cols) throw ConfigError("grid_width must fit the swarm columns");
  // bonus lane + swarm + one open row + player row
  if (grid_height < swarm_rows + 3) throw ConfigError("grid_height must be >= swarm_rows + 3");
  if (lives < 1) throw ConfigError("lives must be >= 1");
  if (swarm_step_period < 1) throw ConfigError("swarm_step_period must be >= 1");
  if (!(bonus_spawn_prob >= 0.0 && bonus_spawn_prob <= 1.0)) {
    throw ConfigError("bonus_spawn_prob must lie in [0, 1]");
  }
  if (!(bomb_prob >= 0.0 && bomb_prob <= 1.0)) throw ConfigError("bomb_prob must lie in [0, 1]");
  if (!(base_row_reward > 0.0) || row_reward_step < 0.0) {
    throw ConfigError("row rewards must be strictly positive");
  }
  if (!(bonus_reward > 0.0)) throw ConfigError("bonus_reward must be positive");
}

double EnvConfig::row_reward(int row_from_bottom) const {
  return base_row_reward + row_reward_step * row_from_bottom;
}

bool GameState::alien_alive(int row, int col) const {
  if (row < 0 || row >= swarm_rows || col < 0 || col >= swarm_cols) return false;
  return alive[static_cast<std::size_t>(row * swarm_cols + col)] != 0;
}

int GameState::alive_count() const {
  return static_cast<int>(std::count(alive.begin(), alive.end(), std::uint8_t{1}));
}

MiniInvaders::MiniInvaders(EnvConfig config) : config_(std::move(config)) { config_.validate(); }

GameState MiniInvaders::fresh_board(const GameState& carry) const {
  GameState s;
  s.swarm_rows = config_.swarm_rows;
  s.swarm_cols = config_.swarm_cols;
  s.alive.assign(static_cast<std::size_t>(config_.swarm_rows * config_.swarm_cols), 1);
  s.swarm_x = 0;
  s.swarm_y = 1;
  s.swarm_direction = 1;
  s.player_col = 0;
  s.lives_left = config_.lives;
  s.step_index = carry.step_index;
  s.rng_key = carry.rng_key;
  return s;
}

GameState MiniInvaders::initial_state(std::uint64_t seed) const {
  GameState carry;
  carry.rng_key = mix64(seed ^ 0x51494e54ULL);
  return fresh_board(carry);
}

double MiniInvaders::uniform(const GameState& state, std::uint64_t stream) const {
  const std::uint64_t bits =
      mix64(state.rng_key ^ mix64(static_cast<std::uint64_t>(state.step_index) * 0x10001ULL + stream));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::pair<GameState, StepOutcome> MiniInvaders::step(const GameState& state, int action) const {
  if (action < 0 || action >= kActionCount) {
    throw std::invalid_argument("action must lie in [0, 5], got " + std::to_string(action));
  }
  const int width = config_.grid_width;
  const int height = config_.grid_height;
  const int rows = config_.swarm_rows;
  const int cols = config_.swarm_cols;
  const int player_row = height - 1;
  if (state.swarm_rows != rows || state.swarm_cols != cols ||
      state.alive.size() != static_cast<std::size_t>(rows * cols)) {
    throw std::invalid_argument("game state does not match the environment's swarm shape");
  }

  GameState next = state;
  StepOutcome outcome;
  auto alive_at = [&](int r, int c) -> std::uint8_t& {
    return next.alive[static_cast<std::size_t>(r * cols + c)];
  };

  next.player_col = std::clamp(state.player_col + horizontal(action), 0, width - 1);
  if (fires(action) && !next.player_bullet) next.player_bullet = Cell{next.player_col, player_row};

  if ((state.step_index + 1) % config_.swarm_step_period == 0) {
    const int moved = next.swarm_x + next.swarm_direction;
    if (moved < 0 || moved + cols > width) {
      next.swarm_direction = -next.swarm_direction;
    } else {
      next.swarm_x = moved;
    }
  }

  if (next.bonus_col) {
    const int moved = *next.bonus_col + 1;
    next.bonus_col = moved < width ? std::optional<int>(moved) : std::nullopt;
  }

  if (next.player_bullet) {
    Cell bullet = *next.player_bullet;
    bullet.y -= 1;
    next.player_bullet = bullet.y >= 0 ? std::optional<Cell>(bullet) : std::nullopt;
  }

  if (next.player_bullet) {
    const Cell bullet = *next.player_bullet;
    const int r = bullet.y - next.swarm_y;
    const int c = bullet.x - next.swarm_x;
    if (r >= 0 && r < rows && c >= 0 && c < cols && alive_at(r, c)) {
      alive_at(r, c) = 0;
      const int from_bottom = rows - 1 - r;
      outcome.reward += config_.row_reward(from_bottom);
      outcome.events.push_back({EventKind::alien_destroyed, from_bottom});
      next.player_bullet.reset();
    } else if (bullet.y == 0 && next.bonus_col && *next.bonus_col == bullet.x) {
      outcome.reward += config_.bonus_reward;
      outcome.events.push_back({EventKind::bonus_destroyed});
      next.bonus_col.reset();
      next.player_bullet.reset();
    }
  }

  bool life_lost = false;
  std::vector<Cell> bombs;
  bombs.reserve(next.bombs.size() + static_cast<std::size_t>(cols));
  for (Cell bomb : next.bombs) {
    bomb.y += 1;
    if (bomb.y == player_row && bomb.x == next.player_col) {
      life_lost = true;
      continue;
    }
    if (bomb.y < player_row) bombs.push_back(bomb);
  }
  for (int c = 0; c < cols; ++c) {
    int lowest = -1;
    for (int r = rows - 1; r >= 0; --r) {
      if (alive_at(r, c)) {
        lowest = r;
        break;
      }
    }
    if (lowest < 0) continue;
    if (uniform(state, static_cast<std::uint64_t>(c)) < config_.bomb_prob) {
      const Cell spawn{next.swarm_x + c, next.swarm_y + lowest + 1};
      if (spawn.y < player_row && std::find(bombs.begin(), bombs.end(), spawn) == bombs.end()) {
        bombs.push_back(spawn);
      }
    }
  }
  next.bombs = std::move(bombs);

  if (!next.bonus_col && uniform(state, kBonusStream) < config_.bonus_spawn_prob) {
    next.bonus_col = 0;
  }

  if (next.alive_count() == 0) {
    outcome.events.push_back({EventKind::swarm_cleared});
    std::fill(next.alive.begin(), next.alive.end(), std::uint8_t{1});
    next.swarm_x = 0;
    next.swarm_direction = 1;
  }

  next.step_index = state.step_index + 1;

  if (life_lost) {
    outcome.events.push_back({EventKind::life_lost});
    next.lives_left -= 1;
    if (next.lives_left <= 0) {
      next = fresh_board(next);
      outcome.reset_occurred = true;
      outcome.events.push_back({EventKind::board_reset});
    }
  }

  return {std::move(next), std::move(outcome)};
}

GameState env_new(const EnvConfig& config, std::uint64_t seed) {
  return MiniInvaders(config).initial_state(seed);
}

std::pair<GameState, StepOutcome> env_step(const EnvConfig& config, const GameState& state,
                                           int action) {
  return MiniInvaders(config).step(state, action);
}

double max_step_reward(const EnvConfig& config, bool include_bonus) {
  const double top_row = config.row_reward(config.swarm_rows - 1);
  return include_bonus ? std::max(top_row, config.bonus_reward) : top_row;
}

double total_swarm_reward(const EnvConfig& config) {
  double per_column = 0.0;
  for (int r = 0; r < config.swarm_rows; ++r) per_column += config.row_reward(r);
  return config.swarm_cols * per_column;
}

}  // namespace qint::env
