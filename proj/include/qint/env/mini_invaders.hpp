#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace qint::env {

inline constexpr int kActionCount = 6;

/// 0 noop, 1 fire, 2 right, 3 left, 4 right+fire, 5 left+fire.
enum class Action : int { noop = 0, fire = 1, right = 2, left = 3, right_fire = 4, left_fire = 5 };

std::string_view action_name(int action);

/// Mini-invaders parameters.
///
/// Layout of the board (row 0 at the top):
///   row 0                      bonus ship lane
///   rows 1 .. swarm_rows       the swarm
///   rows below                 open space
///   row grid_height - 1        player
///
/// The swarm marches one cell sideways every `swarm_step_period` steps and
/// reverses at the walls; it never descends. The player has one bullet in
/// flight at a time; bullets rise and bombs fall one cell per step.
struct EnvConfig {
  int swarm_rows = 6;
  int swarm_cols = 6;
  double base_row_reward = 5.0;   // bottom row
  double row_reward_step = 5.0;   // added per row upward
  double bonus_reward = 200.0;
  double bonus_spawn_prob = 0.005;
  int lives = 3;
  int grid_width = 16;
  int grid_height = 9;
  int swarm_step_period = 4;
  double bomb_prob = 0.02;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  /// Reward for destroying an alien `row_from_bottom` rows above the swarm's bottom row.
  double row_reward(int row_from_bottom) const;

  bool operator==(const EnvConfig&) const = default;
};

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

struct GameState {
  int swarm_rows = 0;
  int swarm_cols = 0;
  std::vector<std::uint8_t> alive;  // swarm_rows x swarm_cols, row-major, row 0 = top swarm row
  int swarm_x = 0;                  // grid column of swarm column 0
  int swarm_y = 1;                  // grid row of swarm row 0
  int swarm_direction = 1;          // +1 right, -1 left
  int player_col = 0;
  std::optional<Cell> player_bullet;
  std::vector<Cell> bombs;
  std::optional<int> bonus_col;  // active bonus ship column (lane is row 0)
  int lives_left = 0;
  std::int64_t step_index = 0;
  std::uint64_t rng_key = 0;

  bool alien_alive(int row, int col) const;
  int alive_count() const;

  bool operator==(const GameState&) const = default;
};

enum class EventKind { alien_destroyed, bonus_destroyed, life_lost, swarm_cleared, board_reset };

struct Event {
  EventKind kind;
  int row_from_bottom = -1;  // alien_destroyed only
  bool operator==(const Event&) const = default;
};

struct StepOutcome {
  double reward = 0.0;
  bool reset_occurred = false;
  std::vector<Event> events;
};

/// Non-episodic grid shooter. `step` is a pure function of (state, action):
/// all randomness is drawn from a counter-based stream keyed by the state's
/// rng_key and step_index. Losing the last life re-initializes the board in
/// place and the stream continues.
class MiniInvaders {
 public:
  explicit MiniInvaders(EnvConfig config);

  const EnvConfig& config() const { return config_; }

  GameState initial_state(std::uint64_t seed) const;
  std::pair<GameState, StepOutcome> step(const GameState& state, int action) const;

 private:
  GameState fresh_board(const GameState& carry) const;
  double uniform(const GameState& state, std::uint64_t stream) const;

  EnvConfig config_;
};

/// Convenience wrappers mirroring the free-function form of the API.
GameState env_new(const EnvConfig& config, std::uint64_t seed);
std::pair<GameState, StepOutcome> env_step(const EnvConfig& config, const GameState& state,
                                           int action);

/// Largest reward obtainable in one step: the top-row reward, or the bonus
/// reward when `include_bonus` is set.
double max_step_reward(const EnvConfig& config, bool include_bonus);

/// Reward collected by destroying one complete swarm.
double total_swarm_reward(const EnvConfig& config);

}  // namespace qint::env
