#pragma once

#include <deque>
#include <vector>

#include "qint/replay/transition.hpp"

namespace qint::replay {

/// Builds n-step transitions from a continuing stream. A reset flag ends every
/// pending window early: those transitions carry partial reward sums and a
/// zero discount so nothing bootstraps across the reset.
class NStepAccumulator {
 public:
  NStepAccumulator(int n, double gamma);

  int horizon() const { return n_; }
  double gamma() const { return gamma_; }
  std::size_t pending() const { return ring_.size(); }

  /// Records (obs, action, reward) and the observation that followed it.
  /// Returns the transitions completed by this step: at most one normally,
  /// every pending one on reset.
  std::vector<Transition> push(std::vector<double> obs, int action, double reward,
                               const std::vector<double>& next_obs, bool reset);

 private:
  struct Entry {
    std::vector<double> obs;
    int action;
    double reward;
  };

  Transition emit_front(const std::vector<double>& next_obs, bool truncated) const;

  int n_;
  double gamma_;
  double gamma_n_;
  std::deque<Entry> ring_;
};

}  // namespace qint::replay
