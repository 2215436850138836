#include "qint/agent/evaluation.hpp"

#include <algorithm>
#include <limits>

#include "qint/agent/agent.hpp"
#include "qint/env/observation.hpp"

namespace qint::agent {

double resolve_r_s(const explain::IntrospectionConfig& config, const env::EnvConfig& env_config) {
  if (config.r_step_max > 0.0) return config.r_step_max;
  return env::max_step_reward(env_config, config.include_bonus_in_rs);
}

std::vector<double> probe_observation(const env::EnvConfig& env_config, int obs_stack) {
  const env::MiniInvaders game(env_config);
  return env::observe(env_config, game.initial_state(env_config.rng_seed), env::ObservationStack(obs_stack))
      .flatten();
}

std::vector<double> probe_q_values(const net::Network& params, const AgentConfig& config,
                                   const env::EnvConfig& env_config) {
  const Vector q = q_values(params, probe_observation(env_config, config.obs_stack), config.support.atoms(), true);
  std::vector<double> out(q.data(), q.data() + q.size());
  for (double& v : out) v *= config.support.return_scale;
  return out;
}

EvalReport run_evaluation(const net::Network& params, const AgentConfig& config, const env::EnvConfig& env_config,
                          double r_s, std::int64_t eval_steps, std::uint64_t seed, EvalPolicy policy) {
  const env::MiniInvaders game(env_config);
  const auto support = config.support.atoms();
  const int actions = params.spec().n_actions;
  net::Network noisy_copy = params;
  Rng rng(seed);
  std::uniform_int_distribution<int> random_action(0, actions - 1);

  EvalReport report;
  report.r_s_used = r_s;
  report.q_mean.assign(static_cast<std::size_t>(actions), 0.0);
  report.q_min.assign(static_cast<std::size_t>(actions), std::numeric_limits<double>::infinity());
  report.q_max.assign(static_cast<std::size_t>(actions), -std::numeric_limits<double>::infinity());
  report.ps_mean.assign(static_cast<std::size_t>(actions), 0.0);

  auto probe = [&](const std::vector<double>& obs) {
    const Vector q = q_values(params, obs, support, true);
    const bool initial = report.probe_count == 0;
    for (int a = 0; a < actions; ++a) {
      const double v = q[a] * config.support.return_scale;
      const auto k = static_cast<std::size_t>(a);
      if (initial) {
        report.q_initial.push_back(v);
        report.ps_initial.push_back(explain::probability_of_success(v, r_s));
      }
      report.q_mean[k] += v;
      report.q_min[k] = std::min(report.q_min[k], v);
      report.q_max[k] = std::max(report.q_max[k], v);
      report.ps_mean[k] += explain::probability_of_success(v, r_s);
    }
    ++report.probe_count;
  };

  env::GameState state = game.initial_state(seed);
  env::ObservationStack stack = env::observe(env_config, state, env::ObservationStack(config.obs_stack));
  std::vector<double> obs = stack.flatten();
  probe(obs);

  for (std::int64_t t = 0; t < eval_steps; ++t) {
    int action = 0;
    switch (policy) {
      case EvalPolicy::greedy:
        action = argmax(q_values(params, obs, support, true));
        break;
      case EvalPolicy::noisy:
        action = act(noisy_copy, obs, support, rng, false);
        break;
      case EvalPolicy::uniform_random:
        action = random_action(rng);
        break;
    }
    auto [next, outcome] = game.step(state, action);
    state = std::move(next);
    report.avg_reward += outcome.reward;
    for (const auto& e : outcome.events) {
      if (e.kind == env::EventKind::swarm_cleared) ++report.swarm_clears;
    }
    stack = env::observe(env_config, state, std::move(stack));
    obs = stack.flatten();
    if (outcome.reset_occurred) {
      ++report.board_resets;
      probe(obs);
    }
  }

  for (int a = 0; a < actions; ++a) {
    report.q_mean[static_cast<std::size_t>(a)] /= report.probe_count;
    report.ps_mean[static_cast<std::size_t>(a)] /= report.probe_count;
  }
  return report;
}

}  // namespace qint::agent
