#include "qint/harness/log_writer.hpp"

#include "qint/core/errors.hpp"

namespace qint::harness {

using nlohmann::json;

json step_record(const agent::StepRecord& r) {
  return {{"kind", "step"}, {"step", r.step}, {"action", r.action}, {"reward", r.reward}, {"reset", r.reset}};
}

json train_record(const agent::TrainRecord& r) {
  return {{"kind", "train"}, {"learn_step", r.learn_step}, {"loss", r.loss}, {"mean_abs_td", r.mean_abs_td}};
}

json eval_record(const agent::EvalReport& r) {
  return {{"kind", "eval"},
          {"segment", r.segment},
          {"avg_reward", r.avg_reward},
          {"swarm_clears", r.swarm_clears},
          {"q", r.q_initial},
          {"ps", r.ps_initial}};
}

json meta_record(const std::string& config_text, std::uint64_t seed) {
  return {{"kind", "meta"}, {"config", config_text}, {"seed", seed}, {"version", kLogVersion}};
}

LogWriter::LogWriter(const std::filesystem::path& path, bool append)
    : path_(path), out_(path, append ? std::ios::app : std::ios::trunc) {
  if (!out_) throw IoError("cannot open log " + path.string());
}

void LogWriter::write(const json& record) {
  out_ << record.dump() << '\n';
  if (!out_) throw IoError("failed writing log " + path_.string());
}

void LogWriter::flush() {
  out_.flush();
  if (!out_) throw IoError("failed writing log " + path_.string());
}

std::vector<json> read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read log " + path.string());
  std::vector<json> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace qint::harness
