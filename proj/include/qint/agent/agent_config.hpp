#pragma once

#include <cstdint>
#include <vector>

#include "qint/head/rainbow_head.hpp"
#include "qint/net/adam.hpp"
#include "qint/replay/prioritized_replay.hpp"

namespace qint::agent {

/// Atom support in learner units. Rewards reach the learner divided by
/// `return_scale`; reported Q-values are multiplied back.
struct SupportConfig {
  int n_atoms = 51;
  double v_min = -10.0;
  double v_max = 10.0;
  double return_scale = 10.0;

  head::AtomSupport atoms() const { return head::AtomSupport(n_atoms, v_min, v_max); }
  bool operator==(const SupportConfig&) const = default;
};

struct NetConfig {
  std::vector<int> trunk_widths{64};
  int head_hidden = 0;
  double sigma0 = 0.25;

  bool operator==(const NetConfig&) const = default;
};

struct AgentConfig {
  double gamma = 0.99;
  int n_step = 3;
  int batch_size = 32;
  std::int64_t target_sync_period = 2000;  // learn steps
  int train_every = 4;                     // environment steps per learn step
  std::int64_t prefill_steps = 8000;
  std::int64_t total_steps = 300000;
  std::int64_t eval_period = 10000;
  std::int64_t eval_steps = 2000;
  std::uint64_t seed = 1;
  int obs_stack = 4;
  bool eval_deterministic = true;  // noise-off acting during evaluation
  double max_grad_norm = 10.0;     // <= 0 disables clipping

  SupportConfig support;
  NetConfig net;
  net::AdamConfig optim;
  replay::ReplayConfig replay;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
  bool operator==(const AgentConfig&) const = default;
};

}  // namespace qint::agent
