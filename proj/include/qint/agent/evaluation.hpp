#pragma once

#include <cstdint>
#include <vector>

#include "qint/agent/agent_config.hpp"
#include "qint/env/mini_invaders.hpp"
#include "qint/explain/introspection.hpp"
#include "qint/net/network.hpp"

namespace qint::agent {

enum class EvalPolicy { greedy, noisy, uniform_random };

/// Result of one evaluation segment. Q-values are in reward units.
struct EvalReport {
  std::int64_t segment = 0;
  double avg_reward = 0.0;  // reward collected over the segment
  int swarm_clears = 0;
  int board_resets = 0;
  int probe_count = 0;  // initial state + one per board reset
  std::vector<double> q_initial;   // at the initial probe state
  std::vector<double> ps_initial;
  std::vector<double> q_mean;
  std::vector<double> q_min;
  std::vector<double> q_max;
  std::vector<double> ps_mean;
  double r_s_used = 0.0;

  bool operator==(const EvalReport&) const = default;
};

/// Normalizer for probability of success: a positive configured r_step_max,
/// otherwise the environment's largest step reward.
double resolve_r_s(const explain::IntrospectionConfig& config, const env::EnvConfig& env_config);

/// Observation of the fixed initial board with a freshly filled frame stack.
std::vector<double> probe_observation(const env::EnvConfig& env_config, int obs_stack);

/// Deterministic per-action Q at the probe state, in reward units.
std::vector<double> probe_q_values(const net::Network& params, const AgentConfig& config,
                                   const env::EnvConfig& env_config);

/// Runs `eval_steps` steps on a fresh environment seeded with `seed`.
/// Q and probability of success are sampled at the initial state and after
/// every board reset.
EvalReport run_evaluation(const net::Network& params, const AgentConfig& config, const env::EnvConfig& env_config,
                          double r_s, std::int64_t eval_steps, std::uint64_t seed,
                          EvalPolicy policy = EvalPolicy::greedy);

}  // namespace qint::agent
