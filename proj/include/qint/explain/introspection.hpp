#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qint::explain {

enum class RsMode { static_max, adaptive };

/// Normalizer for the probability-of-success transform.
///
/// In static mode `r_step_max` is the largest reward obtainable in a single
/// step and must be positive. In adaptive mode it is the running maximum of
/// the step rewards observed so far (0 until a positive reward arrives).
struct IntrospectionConfig {
  double r_step_max = 0.0;
  RsMode mode = RsMode::static_max;
  bool include_bonus_in_rs = false;

  bool operator==(const IntrospectionConfig&) const = default;
};

/// P = 0.5 * log10(q / r_s) + 1, clamped to [0, 1]; q <= 0 maps to 0.
/// Throws std::invalid_argument if r_s <= 0 and NumericError if q is NaN.
double probability_of_success(double q, double r_s);

struct SuccessEstimate {
  double probability = 0.0;
  bool clamped_low = false;   // q <= 0 or the raw value fell below 0
  bool clamped_high = false;  // raw value exceeded 1
};

SuccessEstimate estimate_success(double q, double r_s);

struct ExplanationRecord {
  std::int64_t step_index = 0;
  std::vector<double> q_values;
  std::vector<double> ps_values;
  std::vector<bool> clamped_low;
  std::vector<bool> clamped_high;
  int chosen_action = 0;
  double r_s_used = 0.0;
  std::string rendered_text;
};

struct ContrastResult {
  int action_a = 0;
  int action_b = 0;
  double delta_ps = 0.0;
};

/// Transforms every action's Q-value with `config.r_step_max` as the normalizer
/// and renders "Action <name> chosen with an estimated <P%> probability of success".
ExplanationRecord explain(const std::vector<double>& q_values, const IntrospectionConfig& config, int chosen,
                          std::int64_t step);

/// P(a) - P(b). Throws std::invalid_argument for indices outside the record.
ContrastResult contrast(const ExplanationRecord& record, int a, int b);

/// Raises r_step_max to the observed step reward if larger. Throws StateError
/// in static mode.
IntrospectionConfig adaptive_update(IntrospectionConfig config, double step_reward);

nlohmann::json to_json(const ExplanationRecord& record);
ExplanationRecord record_from_json(const nlohmann::json& j);

}  // namespace qint::explain
