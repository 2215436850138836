#include "qint/head/rainbow_head.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qint/core/errors.hpp"

namespace qint::head {

AtomSupport::AtomSupport(int n_atoms, double v_min, double v_max)
    : n_atoms_(n_atoms), v_min_(v_min), v_max_(v_max) {
  if (n_atoms < 2) throw std::invalid_argument("atom support needs at least 2 atoms");
  if (!(v_min < v_max)) throw std::invalid_argument("atom support needs v_min < v_max");
  delta_ = (v_max - v_min) / (n_atoms - 1);
  atoms_.resize(n_atoms);
  for (int i = 0; i < n_atoms; ++i) atoms_[i] = v_min + i * delta_;
  atoms_[n_atoms - 1] = v_max;
}

DuelingLogits DuelingLogits::from_streams(Vector value_logits, Matrix advantage_logits) {
  if (advantage_logits.cols() != value_logits.size() || advantage_logits.rows() < 1) {
    throw std::invalid_argument("dueling logits: advantage must be actions x atoms");
  }
  DuelingLogits d;
  d.advantage_mean = advantage_logits.colwise().mean().transpose();
  d.value_logits = std::move(value_logits);
  d.advantage_logits = std::move(advantage_logits);
  return d;
}

Matrix combined_logits(const DuelingLogits& logits) {
  const auto atoms = logits.value_logits.size();
  if (logits.advantage_logits.cols() != atoms || logits.advantage_mean.size() != atoms) {
    throw std::invalid_argument("dueling logits: inconsistent atom counts");
  }
  Matrix combined = logits.advantage_logits;
  combined.rowwise() += (logits.value_logits - logits.advantage_mean).transpose();
  return combined;
}

Matrix softmax_rows(const Matrix& logits) {
  if (!logits.allFinite()) throw NumericError("softmax: non-finite logits");
  Matrix out = logits;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
  return out;
}

Matrix log_softmax_rows(const Matrix& logits) {
  if (!logits.allFinite()) throw NumericError("log_softmax: non-finite logits");
  Matrix out = logits;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    row.array() -= row.maxCoeff();
    row.array() -= std::log(row.array().exp().sum());
  }
  return out;
}

CategoricalValueDistribution dueling_combine(const DuelingLogits& logits) {
  return {softmax_rows(combined_logits(logits))};
}

Vector expected_q(const CategoricalValueDistribution& dist, const AtomSupport& support) {
  if (dist.probs.cols() != support.size()) throw std::invalid_argument("expected_q: atom count mismatch");
  return dist.probs * support.atoms();
}

Vector project_target(const Vector& dist_row, const AtomSupport& support, double reward, double discount,
                      bool truncated) {
  const int n = support.size();
  if (dist_row.size() != n) throw std::invalid_argument("project_target: atom count mismatch");
  Vector projected = Vector::Zero(n);
  const Vector& z = support.atoms();
  for (int j = 0; j < n; ++j) {
    const double mass = dist_row[j];
    if (mass == 0.0) continue;
    const double tz = std::clamp(truncated ? reward : reward + discount * z[j], support.v_min(), support.v_max());
    const double b = (tz - support.v_min()) / support.delta();
    const double lower = std::floor(b);
    const double upper = std::ceil(b);
    const int l = std::clamp(static_cast<int>(lower), 0, n - 1);
    const int u = std::clamp(static_cast<int>(upper), 0, n - 1);
    if (l == u) {
      projected[l] += mass;
    } else {
      projected[l] += mass * (upper - b);
      projected[u] += mass * (b - lower);
    }
  }
  return projected;
}

KlLossResult kl_loss(const Vector& target, const Vector& online_log_probs) {
  if (target.size() != online_log_probs.size()) throw std::invalid_argument("kl_loss: size mismatch");
  KlLossResult result;
  result.loss = 0.0;
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    if (target[i] != 0.0) result.loss -= target[i] * online_log_probs[i];
  }
  result.grad_logits = online_log_probs.array().exp().matrix() - target;
  return result;
}

StreamGradients dueling_backward(const Matrix& d_combined) {
  StreamGradients g;
  g.value = d_combined.colwise().sum().transpose();
  g.advantage = d_combined;
  g.advantage.rowwise() -= d_combined.colwise().mean();
  return g;
}

}  // namespace qint::head
