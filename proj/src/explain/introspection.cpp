#include "qint/explain/introspection.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qint/core/errors.hpp"
#include "qint/env/mini_invaders.hpp"

namespace qint::explain {

SuccessEstimate estimate_success(double q, double r_s) {
  if (!(r_s > 0.0) || !std::isfinite(r_s)) {
    throw std::invalid_argument("probability of success needs a positive finite r_s");
  }
  if (std::isnan(q)) throw NumericError("probability of success: Q-value is NaN");
  SuccessEstimate est;
  if (q <= 0.0) {
    est.clamped_low = true;
    return est;
  }
  const double raw = 0.5 * std::log10(q / r_s) + 1.0;
  if (raw < 0.0) {
    est.clamped_low = true;
    est.probability = 0.0;
  } else if (raw > 1.0) {
    est.clamped_high = true;
    est.probability = 1.0;
  } else {
    est.probability = raw;
  }
  return est;
}

double probability_of_success(double q, double r_s) { return estimate_success(q, r_s).probability; }

ExplanationRecord explain(const std::vector<double>& q_values, const IntrospectionConfig& config, int chosen,
                          std::int64_t step) {
  if (chosen < 0 || chosen >= static_cast<int>(q_values.size())) {
    throw std::invalid_argument("explain: chosen action out of range");
  }
  ExplanationRecord record;
  record.step_index = step;
  record.q_values = q_values;
  record.chosen_action = chosen;
  record.r_s_used = config.r_step_max;
  for (double q : q_values) {
    const SuccessEstimate est = estimate_success(q, config.r_step_max);
    record.ps_values.push_back(est.probability);
    record.clamped_low.push_back(est.clamped_low);
    record.clamped_high.push_back(est.clamped_high);
  }
  const std::string name = q_values.size() == static_cast<std::size_t>(env::kActionCount)
                               ? std::string(env::action_name(chosen))
                               : std::to_string(chosen);
  char percent[32];
  std::snprintf(percent, sizeof(percent), "%.1f", 100.0 * record.ps_values[static_cast<std::size_t>(chosen)]);
  record.rendered_text = "Action " + name + " chosen with an estimated " + percent + "% probability of success";
  return record;
}

ContrastResult contrast(const ExplanationRecord& record, int a, int b) {
  const int n = static_cast<int>(record.ps_values.size());
  if (a < 0 || a >= n || b < 0 || b >= n) throw std::invalid_argument("contrast: action index out of range");
  return {a, b, record.ps_values[static_cast<std::size_t>(a)] - record.ps_values[static_cast<std::size_t>(b)]};
}

IntrospectionConfig adaptive_update(IntrospectionConfig config, double step_reward) {
  if (config.mode != RsMode::adaptive) throw StateError("adaptive_update called on a static introspection config");
  if (step_reward > config.r_step_max) config.r_step_max = step_reward;
  return config;
}

nlohmann::json to_json(const ExplanationRecord& record) {
  return nlohmann::json{{"step_index", record.step_index},     {"q_values", record.q_values},
                        {"ps_values", record.ps_values},       {"clamped_low", record.clamped_low},
                        {"clamped_high", record.clamped_high}, {"chosen_action", record.chosen_action},
                        {"r_s_used", record.r_s_used},         {"rendered_text", record.rendered_text}};
}

ExplanationRecord record_from_json(const nlohmann::json& j) {
  ExplanationRecord r;
  r.step_index = j.at("step_index").get<std::int64_t>();
  r.q_values = j.at("q_values").get<std::vector<double>>();
  r.ps_values = j.at("ps_values").get<std::vector<double>>();
  r.clamped_low = j.at("clamped_low").get<std::vector<bool>>();
  r.clamped_high = j.at("clamped_high").get<std::vector<bool>>();
  r.chosen_action = j.at("chosen_action").get<int>();
  r.r_s_used = j.at("r_s_used").get<double>();
  r.rendered_text = j.at("rendered_text").get<std::string>();
  return r;
}

}  // namespace qint::explain
