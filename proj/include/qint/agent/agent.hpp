#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qint/agent/agent_config.hpp"
#include "qint/core/rng.hpp"
#include "qint/env/mini_invaders.hpp"
#include "qint/head/rainbow_head.hpp"
#include "qint/net/adam.hpp"
#include "qint/net/network.hpp"
#include "qint/replay/nstep.hpp"
#include "qint/replay/prioritized_replay.hpp"

namespace qint::agent {

/// Maps a batch of observations (rows) to one action-by-atom distribution per row.
using DistributionFn = std::function<std::vector<head::CategoricalValueDistribution>(const Matrix& obs)>;

Matrix stack_rows(const std::vector<const std::vector<double>*>& rows);

/// Per-row action distributions from a network's dueling head.
std::vector<head::CategoricalValueDistribution> network_distributions(const net::Network& net, const Matrix& obs,
                                                                      bool deterministic);

/// Expected Q per action for one observation, in learner units.
Vector q_values(const net::Network& net, const std::vector<double>& obs, const head::AtomSupport& support,
                bool deterministic);

/// Lowest index among the maxima.
int argmax(const Vector& values);

/// Greedy acting uses the mean parameters; otherwise fresh noise is drawn
/// into `online` before the forward pass.
int act(net::Network& online, const std::vector<double>& obs, const head::AtomSupport& support, Rng& rng,
        bool greedy);

/// Double-Q distributional targets: the action at next_obs is chosen by
/// `select` (online network) and its distribution taken from `evaluate`
/// (target network), then projected through r + discount * z.
/// Returns batch x n_atoms.
Matrix compute_targets(const std::vector<replay::Transition>& batch, const DistributionFn& select,
                       const DistributionFn& evaluate, const head::AtomSupport& support);

Matrix compute_targets(const std::vector<replay::Transition>& batch, const net::Network& online,
                       const net::Network& target, const head::AtomSupport& support, bool deterministic_noise);

struct LossGradients {
  double loss = 0.0;                // sum_i w_i * CE_i / batch
  std::vector<double> per_sample;   // unweighted CE_i
  net::ParamGradients grads;
};

/// Cross-entropy between `targets` (batch x atoms) and the online distribution
/// of each sample's action, IS-weighted and averaged over the batch, with its
/// gradient on every parameter. Noisy layers use their current noise unless
/// `deterministic`.
LossGradients distributional_loss(const net::Network& online, const Matrix& obs, const std::vector<int>& actions,
                                  const Matrix& targets, const std::vector<double>& weights, bool deterministic);

struct TrainStepResult {
  double loss = 0.0;              // IS-weighted mean cross-entropy
  std::vector<double> td_errors;  // per-sample cross-entropy, fed back as priorities
  double mean_abs_td = 0.0;
  bool synced = false;
};

/// Online/target networks, optimizer, replay and RNG for one learner.
class Agent {
 public:
  Agent(AgentConfig config, const env::EnvConfig& env_config);

  const AgentConfig& config() const { return config_; }
  const head::AtomSupport& support() const { return support_; }
  int input_dim() const { return input_dim_; }

  net::Network& online() { return online_; }
  const net::Network& online() const { return online_; }
  const net::Network& target() const { return target_; }
  net::Adam& optimizer() { return optimizer_; }
  replay::PrioritizedReplay& replay() { return replay_; }
  const replay::PrioritizedReplay& replay() const { return replay_; }
  replay::NStepAccumulator& nstep() { return nstep_; }
  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }
  std::int64_t learn_steps() const { return learn_steps_; }

  int act(const std::vector<double>& obs, bool greedy);

  /// Feeds one environment step (reward already in learner units) through
  /// the n-step accumulator into replay.
  void record(std::vector<double> obs, int action, double reward, const std::vector<double>& next_obs, bool reset);

  /// One prioritized learning update. Throws StateError when replay holds
  /// fewer than batch_size transitions.
  TrainStepResult train_step(double beta);

  void sync_target() { target_ = online_; }

 private:
  AgentConfig config_;
  head::AtomSupport support_;
  int input_dim_;
  Rng rng_;
  net::Network online_;
  net::Network target_;
  net::Adam optimizer_;
  replay::PrioritizedReplay replay_;
  replay::NStepAccumulator nstep_;
  std::int64_t learn_steps_ = 0;
};

}  // namespace qint::agent
