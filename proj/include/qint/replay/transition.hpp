#pragma once

#include <vector>

namespace qint::replay {

/// One n-step experience unit. Observations are flattened frame stacks.
struct Transition {
  std::vector<double> obs;
  int action = 0;
  double n_step_reward = 0.0;  // sum_{k<n} gamma^k r_{t+k}
  std::vector<double> next_obs;
  double discount = 0.0;  // gamma^n, or 0 when truncated
  bool truncated = false;  // a reset happened inside the window

  bool operator==(const Transition&) const = default;
};

}  // namespace qint::replay
