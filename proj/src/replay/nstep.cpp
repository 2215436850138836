#include "qint/replay/nstep.hpp"

#include <cmath>
#include <stdexcept>

namespace qint::replay {

NStepAccumulator::NStepAccumulator(int n, double gamma) : n_(n), gamma_(gamma) {
  if (n < 1) throw std::invalid_argument("n-step horizon must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  gamma_n_ = std::pow(gamma, n);
}

Transition NStepAccumulator::emit_front(const std::vector<double>& next_obs, bool truncated) const {
  Transition t;
  const Entry& front = ring_.front();
  t.obs = front.obs;
  t.action = front.action;
  double weight = 1.0;
  for (const Entry& e : ring_) {
    t.n_step_reward += weight * e.reward;
    weight *= gamma_;
  }
  t.next_obs = next_obs;
  t.truncated = truncated;
  t.discount = truncated ? 0.0 : gamma_n_;
  return t;
}

std::vector<Transition> NStepAccumulator::push(std::vector<double> obs, int action, double reward,
                                               const std::vector<double>& next_obs, bool reset) {
  ring_.push_back({std::move(obs), action, reward});
  std::vector<Transition> out;
  if (reset) {
    while (!ring_.empty()) {
      out.push_back(emit_front(next_obs, true));
      ring_.pop_front();
    }
  } else if (static_cast<int>(ring_.size()) == n_) {
    out.push_back(emit_front(next_obs, false));
    ring_.pop_front();
  }
  return out;
}

}  // namespace qint::replay
