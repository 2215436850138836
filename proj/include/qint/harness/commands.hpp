#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qint/agent/training.hpp"
#include "qint/harness/run_config.hpp"

namespace qint::harness {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitIo = 3, kExitCheckpoint = 4 };

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::vector<std::string> overrides;  // section.key=value, applied after the file
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::int64_t> steps;
  std::vector<std::string> states;  // explain: "initial" or a step index into the run log
  std::optional<std::filesystem::path> log;
  std::optional<std::filesystem::path> run_dir;  // plot input
  std::string policy = "greedy";                 // eval: greedy, noisy or random
};

/// Run directory layout written by `train`.
struct RunPaths {
  std::filesystem::path root;
  std::filesystem::path config() const { return root / "config.txt"; }
  std::filesystem::path log() const { return root / "log.jsonl"; }
  std::filesystem::path checkpoints() const { return root / "checkpoints"; }
  std::filesystem::path segment_checkpoint(std::int64_t segment) const;
  std::filesystem::path final_checkpoint() const { return checkpoints() / "final.qint"; }
};

/// Config file (or the run's config.txt beside `checkpoint`, or defaults), then
/// overrides, then --seed.
RunConfig resolve_config(const CommandOptions& options);

/// Trains into `paths.root`: config.txt, log.jsonl, one checkpoint per
/// evaluation and checkpoints/final.qint.
agent::TrainingSummary train_run(const RunConfig& config, const RunPaths& paths);

// Each command prints machine-readable output to `out`, diagnostics to `err`,
// and returns an ExitCode.
int cmd_train(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_eval(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_explain(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_plot(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace qint::harness
