#include "qint/agent/agent.hpp"

#include <cmath>
#include <stdexcept>

#include "qint/core/errors.hpp"
#include "qint/env/observation.hpp"

namespace qint::agent {

void AgentConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("agent.gamma must lie in (0, 1]");
  if (n_step < 1 || batch_size < 1 || target_sync_period < 1 || train_every < 1 || prefill_steps < 1 ||
      total_steps < 1 || eval_period < 1 || eval_steps < 1 || obs_stack < 1) {
    throw ConfigError("agent counts must be positive");
  }
  if (prefill_steps > total_steps) throw ConfigError("agent.prefill_steps must not exceed agent.total_steps");
  if (support.n_atoms < 2 || !(support.v_min < support.v_max)) {
    throw ConfigError("support needs n_atoms >= 2 and v_min < v_max");
  }
  if (!(support.return_scale > 0.0)) throw ConfigError("support.return_scale must be > 0");
  for (int w : net.trunk_widths) {
    if (w < 1) throw ConfigError("net.trunk_widths entries must be >= 1");
  }
  if (net.head_hidden < 0) throw ConfigError("net.head_hidden must be >= 0");
  if (!(net.sigma0 >= 0.0)) throw ConfigError("net.sigma0 must be >= 0");
  if (!(optim.learning_rate >= 0.0) || !(optim.beta1 >= 0.0 && optim.beta1 < 1.0) ||
      !(optim.beta2 >= 0.0 && optim.beta2 < 1.0) || !(optim.epsilon > 0.0)) {
    throw ConfigError("invalid optimizer constants");
  }
  replay.validate();
  if (replay.capacity < static_cast<std::size_t>(batch_size)) {
    throw ConfigError("replay.capacity must be >= agent.batch_size");
  }
}

Matrix stack_rows(const std::vector<const std::vector<double>*>& rows) {
  if (rows.empty()) return Matrix(0, 0);
  const auto cols = static_cast<Eigen::Index>(rows.front()->size());
  Matrix out(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<Eigen::Index>(rows[i]->size()) != cols) throw std::invalid_argument("ragged observation batch");
    out.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector>(rows[i]->data(), cols).transpose();
  }
  return out;
}

std::vector<head::CategoricalValueDistribution> network_distributions(const net::Network& net, const Matrix& obs,
                                                                      bool deterministic) {
  const auto fwd = net.forward(obs, deterministic);
  const int actions = net.spec().n_actions;
  const int atoms = net.spec().n_atoms;
  std::vector<head::CategoricalValueDistribution> out;
  out.reserve(static_cast<std::size_t>(obs.rows()));
  for (Eigen::Index i = 0; i < obs.rows(); ++i) {
    Matrix adv = Eigen::Map<const Matrix>(fwd.advantage_logits.row(i).data(), actions, atoms);
    out.push_back(head::dueling_combine(
        head::DuelingLogits::from_streams(fwd.value_logits.row(i).transpose(), std::move(adv))));
  }
  return out;
}

Vector q_values(const net::Network& net, const std::vector<double>& obs, const head::AtomSupport& support,
                bool deterministic) {
  const Matrix x = Eigen::Map<const Vector>(obs.data(), static_cast<Eigen::Index>(obs.size())).transpose();
  return head::expected_q(network_distributions(net, x, deterministic).front(), support);
}

int argmax(const Vector& values) {
  int best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = static_cast<int>(i);
  }
  return best;
}

int act(net::Network& online, const std::vector<double>& obs, const head::AtomSupport& support, Rng& rng,
        bool greedy) {
  if (!greedy) online.resample_noise(rng);
  return argmax(q_values(online, obs, support, greedy));
}

Matrix compute_targets(const std::vector<replay::Transition>& batch, const DistributionFn& select,
                       const DistributionFn& evaluate, const head::AtomSupport& support) {
  if (batch.empty()) throw std::invalid_argument("compute_targets: empty batch");
  std::vector<const std::vector<double>*> rows;
  rows.reserve(batch.size());
  for (const auto& t : batch) rows.push_back(&t.next_obs);
  const Matrix next_obs = stack_rows(rows);

  const auto chooser = select(next_obs);
  const auto evaluator = evaluate(next_obs);
  if (chooser.size() != batch.size() || evaluator.size() != batch.size()) {
    throw std::logic_error("compute_targets: distribution batch size mismatch");
  }

  Matrix targets(static_cast<Eigen::Index>(batch.size()), support.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const int best = argmax(head::expected_q(chooser[i], support));
    const Vector row = evaluator[i].probs.row(best).transpose();
    targets.row(static_cast<Eigen::Index>(i)) =
        head::project_target(row, support, batch[i].n_step_reward, batch[i].discount, batch[i].truncated)
            .transpose();
  }
  return targets;
}

Matrix compute_targets(const std::vector<replay::Transition>& batch, const net::Network& online,
                       const net::Network& target, const head::AtomSupport& support, bool deterministic_noise) {
  return compute_targets(
      batch, [&](const Matrix& obs) { return network_distributions(online, obs, deterministic_noise); },
      [&](const Matrix& obs) { return network_distributions(target, obs, deterministic_noise); }, support);
}

LossGradients distributional_loss(const net::Network& online, const Matrix& obs, const std::vector<int>& actions,
                                  const Matrix& targets, const std::vector<double>& weights, bool deterministic) {
  const auto batch = static_cast<std::size_t>(obs.rows());
  if (actions.size() != batch || weights.size() != batch || static_cast<std::size_t>(targets.rows()) != batch) {
    throw std::invalid_argument("distributional_loss: batch sizes disagree");
  }
  const auto fwd = online.forward(obs, deterministic);
  const int n_actions = online.spec().n_actions;
  const int atoms = online.spec().n_atoms;
  Matrix d_value = Matrix::Zero(obs.rows(), atoms);
  Matrix d_advantage = Matrix::Zero(obs.rows(), n_actions * atoms);

  LossGradients out;
  out.per_sample.resize(batch);
  const double inv_batch = 1.0 / static_cast<double>(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const int a = actions[i];
    Matrix adv = Eigen::Map<const Matrix>(fwd.advantage_logits.row(r).data(), n_actions, atoms);
    const auto logits = head::DuelingLogits::from_streams(fwd.value_logits.row(r).transpose(), std::move(adv));
    const Matrix chosen = head::combined_logits(logits).row(a);
    const Vector log_probs = head::log_softmax_rows(chosen).row(0).transpose();
    const auto ce = head::kl_loss(targets.row(r).transpose(), log_probs);

    const double w = weights[i] * inv_batch;
    out.per_sample[i] = ce.loss;
    out.loss += w * ce.loss;

    Matrix d_combined = Matrix::Zero(n_actions, atoms);
    d_combined.row(a) = w * ce.grad_logits.transpose();
    const auto streams = head::dueling_backward(d_combined);
    d_value.row(r) = streams.value.transpose();
    d_advantage.row(r) = Eigen::Map<const Vector>(streams.advantage.data(), n_actions * atoms).transpose();
  }
  out.grads = online.backward(fwd.tape, d_value, d_advantage);
  return out;
}

namespace {

net::NetworkSpec network_spec(const AgentConfig& config, int input_dim) {
  net::NetworkSpec spec;
  spec.input_dim = input_dim;
  spec.trunk_widths = config.net.trunk_widths;
  spec.head_hidden = config.net.head_hidden;
  spec.n_actions = env::kActionCount;
  spec.n_atoms = config.support.n_atoms;
  spec.sigma0 = config.net.sigma0;
  return spec;
}

}  // namespace

Agent::Agent(AgentConfig config, const env::EnvConfig& env_config)
    : config_((config.validate(), std::move(config))),
      support_(config_.support.atoms()),
      input_dim_(config_.obs_stack * env::frame_size(env_config)),
      rng_(config_.seed),
      online_(net::Network::build(network_spec(config_, input_dim_), rng_)),
      target_(online_),
      optimizer_(config_.optim, online_),
      replay_(config_.replay),
      nstep_(config_.n_step, config_.gamma) {}

int Agent::act(const std::vector<double>& obs, bool greedy) {
  return agent::act(online_, obs, support_, rng_, greedy);
}

void Agent::record(std::vector<double> obs, int action, double reward, const std::vector<double>& next_obs,
                   bool reset) {
  for (auto& t : nstep_.push(std::move(obs), action, reward, next_obs, reset)) replay_.add(std::move(t));
}

TrainStepResult Agent::train_step(double beta) {
  const auto batch_size = static_cast<std::size_t>(config_.batch_size);
  if (replay_.size() < batch_size) throw StateError("train_step: replay holds fewer than batch_size transitions");
  auto batch = replay_.sample(batch_size, beta, rng_);

  online_.resample_noise(rng_);
  target_.resample_noise(rng_);
  const Matrix targets = compute_targets(batch.transitions, online_, target_, support_, false);

  std::vector<const std::vector<double>*> rows;
  std::vector<int> actions;
  rows.reserve(batch_size);
  for (const auto& t : batch.transitions) {
    rows.push_back(&t.obs);
    actions.push_back(t.action);
  }
  auto lg = distributional_loss(online_, stack_rows(rows), actions, targets, batch.weights, false);

  TrainStepResult result;
  result.loss = lg.loss;
  result.td_errors = std::move(lg.per_sample);
  for (double td : result.td_errors) result.mean_abs_td += std::abs(td) / static_cast<double>(batch_size);
  auto& grads = lg.grads;
  net::clip_global_norm(grads, config_.max_grad_norm);
  optimizer_.step(online_, grads);
  replay_.update(batch.indices, result.td_errors);

  ++learn_steps_;
  if (learn_steps_ % config_.target_sync_period == 0) {
    sync_target();
    result.synced = true;
  }
  return result;
}

}  // namespace qint::agent
