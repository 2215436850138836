#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qint/agent/evaluation.hpp"
#include "qint/agent/training.hpp"

namespace qint::harness {

inline constexpr int kLogVersion = 1;

/// JSON-lines record builders. Every record carries "kind" plus exactly the
/// fields of that kind:
///
///     step  {step, action, reward, reset}
///     train {learn_step, loss, mean_abs_td}
///     eval  {segment, avg_reward, swarm_clears, q, ps}
///     meta  {config, seed, version}
nlohmann::json step_record(const agent::StepRecord& r);
nlohmann::json train_record(const agent::TrainRecord& r);
nlohmann::json eval_record(const agent::EvalReport& r);
nlohmann::json meta_record(const std::string& config_text, std::uint64_t seed);

/// Appends one record per line. Throws IoError on write failure.
class LogWriter {
 public:
  explicit LogWriter(const std::filesystem::path& path, bool append = false);

  void write(const nlohmann::json& record);
  void flush();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// Every line of `path` parsed; throws IoError if unreadable or a line is not JSON.
std::vector<nlohmann::json> read_log(const std::filesystem::path& path);

}  // namespace qint::harness
