#pragma once

#include "qint/core/linalg.hpp"

namespace qint::head {

/// Fixed grid of return values z_i = v_min + i * delta.
class AtomSupport {
 public:
  /// Throws std::invalid_argument unless n_atoms >= 2 and v_min < v_max.
  AtomSupport(int n_atoms, double v_min, double v_max);

  int size() const { return n_atoms_; }
  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  double delta() const { return delta_; }
  const Vector& atoms() const { return atoms_; }

 private:
  int n_atoms_;
  double v_min_;
  double v_max_;
  double delta_;
  Vector atoms_;
};

/// Per-action probability vectors over the atom support (actions x atoms).
struct CategoricalValueDistribution {
  Matrix probs;
};

struct DuelingLogits {
  Vector value_logits;      // n_atoms
  Matrix advantage_logits;  // n_actions x n_atoms
  Vector advantage_mean;    // n_atoms, mean over actions

  /// Builds the record and computes advantage_mean from the advantage logits.
  static DuelingLogits from_streams(Vector value_logits, Matrix advantage_logits);
};

/// Per-action logits v^i + a^i(a) - mean_a' a^i(a') (actions x atoms).
Matrix combined_logits(const DuelingLogits& logits);

/// Row-wise softmax with max subtraction. Throws NumericError on non-finite input.
Matrix softmax_rows(const Matrix& logits);
Matrix log_softmax_rows(const Matrix& logits);

/// Softmax over atoms of the dueling-combined logits, per action.
CategoricalValueDistribution dueling_combine(const DuelingLogits& logits);

/// Q(a) = sum_i z_i p^i(a).
Vector expected_q(const CategoricalValueDistribution& dist, const AtomSupport& support);

/// Categorical projection of the shifted/scaled distribution r + discount * z
/// back onto the support. A truncated transition collapses every atom to r.
Vector project_target(const Vector& dist_row, const AtomSupport& support, double reward, double discount,
                      bool truncated);

struct KlLossResult {
  double loss = 0.0;
  Vector grad_logits;  // d loss / d logits = softmax(logits) - target
};

/// Cross-entropy -sum_i target_i * log p_i for one action row.
KlLossResult kl_loss(const Vector& target, const Vector& online_log_probs);

/// Splits a gradient on the combined per-action logits (actions x atoms) into
/// gradients on the value and advantage streams.
struct StreamGradients {
  Vector value;      // n_atoms
  Matrix advantage;  // n_actions x n_atoms
};
StreamGradients dueling_backward(const Matrix& d_combined);

}  // namespace qint::head
