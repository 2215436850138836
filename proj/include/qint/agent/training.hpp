#pragma once

#include <cstdint>
#include <vector>

#include "qint/agent/agent.hpp"
#include "qint/agent/evaluation.hpp"
#include "qint/explain/introspection.hpp"

namespace qint::agent {

struct StepRecord {
  std::int64_t step = 0;
  int action = 0;
  double reward = 0.0;
  bool reset = false;
};

struct TrainRecord {
  std::int64_t learn_step = 0;
  double loss = 0.0;
  double mean_abs_td = 0.0;
};

/// Receives the training stream. Evaluation callbacks fire after the agent
/// has been updated for the step that closed the segment.
class TrainingObserver {
 public:
  virtual ~TrainingObserver() = default;
  virtual void on_step(const StepRecord&) {}
  virtual void on_train(const TrainRecord&) {}
  virtual void on_evaluation(const EvalReport&, const Agent&, std::int64_t /*env_steps*/) {}
};

struct TrainingSummary {
  std::int64_t env_steps = 0;
  std::int64_t learn_steps = 0;
  std::size_t replay_size = 0;
  std::vector<EvalReport> evaluations;
  explain::IntrospectionConfig introspection;  // final state (adaptive mode tracks the running max)
};

/// Seed of the environment the learner interacts with.
std::uint64_t training_env_seed(const AgentConfig& config, const env::EnvConfig& env_config);
/// Seed of the fresh environment used by periodic evaluation.
std::uint64_t evaluation_seed(const AgentConfig& config);

/// Linear importance-sampling exponent schedule over the learning phase.
double beta_schedule(const AgentConfig& config, std::int64_t env_steps);

/// Prefill with noisy acting and no learning, then learn every train_every
/// steps until total_steps. Evaluates every eval_period steps and once more at
/// the end unless the last step already closed a segment. The stream is never
/// terminated: board resets only truncate n-step windows.
TrainingSummary run_training(const AgentConfig& config, const env::EnvConfig& env_config,
                             const explain::IntrospectionConfig& introspection, TrainingObserver& observer);

}  // namespace qint::agent
