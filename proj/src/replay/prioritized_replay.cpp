#include "qint/replay/prioritized_replay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qint/core/errors.hpp"

namespace qint::replay {

void ReplayConfig::validate() const {
  if (capacity == 0) throw ConfigError("replay capacity must be >= 1");
  if (!(alpha >= 0.0)) throw ConfigError("replay alpha must be >= 0");
  if (!(beta_start >= 0.0 && beta_start <= 1.0 && beta_end >= 0.0 && beta_end <= 1.0)) {
    throw ConfigError("replay beta must lie in [0, 1]");
  }
  if (!(eps_priority > 0.0)) throw ConfigError("replay eps_priority must be > 0");
}

PrioritizedReplay::PrioritizedReplay(ReplayConfig config) : config_(config), tree_((config.validate(), config.capacity)) {
  storage_.reserve(std::min<std::size_t>(config_.capacity, 1 << 16));
}

const Transition& PrioritizedReplay::at(std::size_t slot) const {
  if (slot >= size_) throw std::invalid_argument("replay slot out of range");
  return storage_[slot];
}

std::size_t PrioritizedReplay::add(Transition t) {
  const std::size_t slot = cursor_;
  if (slot < storage_.size()) {
    storage_[slot] = std::move(t);
  } else {
    storage_.push_back(std::move(t));
  }
  tree_.set(slot, max_priority_);
  cursor_ = (cursor_ + 1) % config_.capacity;
  size_ = std::min(size_ + 1, config_.capacity);
  return slot;
}

SampledBatch PrioritizedReplay::sample(std::size_t batch, double beta, Rng& rng) const {
  if (batch == 0 || size_ < batch) {
    throw StateError("replay holds " + std::to_string(size_) + " transitions, batch needs " + std::to_string(batch));
  }
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in [0, 1]");
  const double total = tree_.total();
  SampledBatch out;
  out.indices.reserve(batch);
  out.transitions.reserve(batch);
  out.weights.reserve(batch);

  const double segment = total / static_cast<double>(batch);
  for (std::size_t k = 0; k < batch; ++k) {
    double u = 0.0;
    if (config_.stratified) {
      std::uniform_real_distribution<double> draw(segment * k, segment * (k + 1));
      u = draw(rng);
    } else {
      std::uniform_real_distribution<double> draw(0.0, total);
      u = draw(rng);
    }
    u = std::min(u, std::nextafter(total, 0.0));
    const std::size_t slot = std::min(tree_.sample(u), size_ - 1);
    out.indices.push_back(slot);
  }

  double max_weight = 0.0;
  for (std::size_t slot : out.indices) {
    const double p = tree_.get(slot) / total;
    const double w = std::pow(static_cast<double>(size_) * p, -beta);
    out.weights.push_back(w);
    max_weight = std::max(max_weight, w);
  }
  for (double& w : out.weights) w /= max_weight;
  for (std::size_t slot : out.indices) out.transitions.push_back(storage_[slot]);
  return out;
}

void PrioritizedReplay::update(const std::vector<std::size_t>& indices, const std::vector<double>& td_errors) {
  if (indices.size() != td_errors.size()) throw std::invalid_argument("replay update: size mismatch");
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= size_) throw std::invalid_argument("replay update: index out of range");
    if (!std::isfinite(td_errors[k])) throw std::invalid_argument("replay update: non-finite td error");
    const double p = std::pow(std::abs(td_errors[k]) + config_.eps_priority, config_.alpha);
    tree_.set(indices[k], p);
    max_priority_ = std::max(max_priority_, p);
  }
}

}  // namespace qint::replay
