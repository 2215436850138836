#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qint/agent/agent_config.hpp"
#include "qint/env/mini_invaders.hpp"
#include "qint/explain/introspection.hpp"

namespace qint::harness {

/// Everything a run needs. The seed lives in `agent.seed`.
///
/// Text form, one setting per line:
///
///     # comment
///     env.swarm_rows = 4
///     net.trunk_widths = 64,64
///     introspection.mode = adaptive
///
/// Sections: env, agent, net, support, optim, replay, introspection, run.
struct RunConfig {
  env::EnvConfig env;
  agent::AgentConfig agent;
  explain::IntrospectionConfig introspection;
  std::string out_dir = "run";

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Parses config text on top of the defaults. Unknown keys, malformed lines and
/// bad values raise ConfigError naming `source` and the line number.
RunConfig parse_run_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies one `section.key=value` override.
void apply_override(RunConfig& config, std::string_view assignment);

/// Writes every key, so parse(serialize(c)) == c.
std::string serialize(const RunConfig& config);

std::vector<std::string> config_keys();

}  // namespace qint::harness
