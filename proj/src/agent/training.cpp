#include "qint/agent/training.hpp"

#include <algorithm>

#include "qint/env/observation.hpp"

namespace qint::agent {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a * 0x9e3779b97f4a7c15ULL ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t training_env_seed(const AgentConfig& config, const env::EnvConfig& env_config) {
  return mix(config.seed, env_config.rng_seed);
}

std::uint64_t evaluation_seed(const AgentConfig& config) { return mix(config.seed, 0xe7a1ULL); }

double beta_schedule(const AgentConfig& config, std::int64_t env_steps) {
  const double span = static_cast<double>(config.total_steps - config.prefill_steps);
  const double progress =
      span > 0.0 ? std::clamp(static_cast<double>(env_steps - config.prefill_steps) / span, 0.0, 1.0) : 1.0;
  return config.replay.beta_start + (config.replay.beta_end - config.replay.beta_start) * progress;
}

TrainingSummary run_training(const AgentConfig& config, const env::EnvConfig& env_config,
                             const explain::IntrospectionConfig& introspection, TrainingObserver& observer) {
  Agent agent(config, env_config);
  const env::MiniInvaders game(env_config);
  const double scale = config.support.return_scale;

  TrainingSummary summary;
  summary.introspection = introspection;

  env::GameState state = game.initial_state(training_env_seed(config, env_config));
  env::ObservationStack stack = env::observe(env_config, state, env::ObservationStack(config.obs_stack));
  std::vector<double> obs = stack.flatten();

  for (std::int64_t t = 0; t < config.total_steps; ++t) {
    const int action = agent.act(obs, false);
    auto [next, outcome] = game.step(state, action);
    state = std::move(next);
    stack = env::observe(env_config, state, std::move(stack));
    std::vector<double> next_obs = stack.flatten();

    observer.on_step({t, action, outcome.reward, outcome.reset_occurred});
    if (summary.introspection.mode == explain::RsMode::adaptive) {
      summary.introspection = explain::adaptive_update(summary.introspection, outcome.reward);
    }
    agent.record(std::move(obs), action, outcome.reward / scale, next_obs, outcome.reset_occurred);
    obs = std::move(next_obs);

    const std::int64_t done = t + 1;
    if (done > config.prefill_steps && (done - config.prefill_steps) % config.train_every == 0 &&
        agent.replay().size() >= static_cast<std::size_t>(config.batch_size)) {
      const auto result = agent.train_step(beta_schedule(config, done));
      observer.on_train({agent.learn_steps(), result.loss, result.mean_abs_td});
    }

    if (done % config.eval_period == 0 || done == config.total_steps) {
      const double r_s = resolve_r_s(summary.introspection, env_config);
      EvalReport report = run_evaluation(agent.online(), config, env_config, r_s, config.eval_steps,
                                         evaluation_seed(config),
                                         config.eval_deterministic ? EvalPolicy::greedy : EvalPolicy::noisy);
      report.segment = static_cast<std::int64_t>(summary.evaluations.size());
      observer.on_evaluation(report, agent, done);
      summary.evaluations.push_back(std::move(report));
    }
  }

  summary.env_steps = config.total_steps;
  summary.learn_steps = agent.learn_steps();
  summary.replay_size = agent.replay().size();
  return summary;
}

}  // namespace qint::agent
