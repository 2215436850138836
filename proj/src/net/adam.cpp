#include "qint/net/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace qint::net {

Adam::Adam(AdamConfig config, const Network& shape_source) : config_(config) {
  for (const auto& p : shape_source.parameters()) {
    m_.push_back(Vector::Zero(static_cast<Eigen::Index>(p.values.size())));
    v_.push_back(Vector::Zero(static_cast<Eigen::Index>(p.values.size())));
  }
}

void Adam::step(std::vector<ParamRef> params, const ParamGradients& grads) {
  if (params.size() != grads.size() || params.size() != m_.size()) {
    throw std::logic_error("adam: parameter/gradient tensor count mismatch");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (static_cast<Eigen::Index>(params[i].values.size()) != grads[i].size() || grads[i].size() != m_[i].size()) {
      throw std::logic_error("adam: shape mismatch in tensor " + params[i].name);
    }
  }
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double correction1 = 1.0 - std::pow(config_.beta1, t);
  const double correction2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grads[i];
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grads[i].cwiseProduct(grads[i]);
    Eigen::Map<Vector> p(params[i].values.data(), static_cast<Eigen::Index>(params[i].values.size()));
    p.array() -= config_.learning_rate * (m_[i].array() / correction1) /
                 ((v_[i].array() / correction2).sqrt() + config_.epsilon);
  }
}

double clip_global_norm(ParamGradients& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& g : grads) sq += g.squaredNorm();
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (auto& g : grads) g *= scale;
  }
  return norm;
}

}  // namespace qint::net
