#pragma once

#include <cstdint>

#include "qint/net/network.hpp"

namespace qint::net {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1.5e-4;

  bool operator==(const AdamConfig&) const = default;
};

/// Bias-corrected Adam with per-tensor moment accumulators.
class Adam {
 public:
  Adam() = default;
  Adam(AdamConfig config, const Network& shape_source);

  const AdamConfig& config() const { return config_; }
  void set_learning_rate(double lr) { config_.learning_rate = lr; }
  std::int64_t steps() const { return steps_; }
  const std::vector<Vector>& first_moments() const { return m_; }
  const std::vector<Vector>& second_moments() const { return v_; }

  /// Applies one update to `params` in place. Throws std::logic_error when the
  /// gradients are not shape-congruent with the parameters.
  void step(std::vector<ParamRef> params, const ParamGradients& grads);
  void step(Network& net, const ParamGradients& grads) { step(net.parameters(), grads); }

 private:
  AdamConfig config_;
  std::vector<Vector> m_;
  std::vector<Vector> v_;
  std::int64_t steps_ = 0;
};

/// Rescales `grads` so their global L2 norm is at most `max_norm` (no-op when
/// max_norm <= 0). Returns the norm before clipping.
double clip_global_norm(ParamGradients& grads, double max_norm);

}  // namespace qint::net
