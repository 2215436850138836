#include "qint/harness/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

#include "qint/core/errors.hpp"

namespace qint::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("cannot parse '" + std::string(text) + "' as a number");
  }
  return value;
}

template <class T>
std::string format_number(T value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("cannot parse '" + std::string(text) + "' as a boolean");
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number<int>(trim(text.substr(start, comma - start))));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class Member>
Field numeric(std::string key, Member member) {
  using T = std::remove_cvref_t<decltype(std::invoke(member, std::declval<RunConfig&>()))>;
  return {std::move(key),
          [member](RunConfig& c, std::string_view v) { std::invoke(member, c) = parse_number<T>(v); },
          [member](const RunConfig& c) { return format_number(std::invoke(member, c)); }};
}

template <class Member>
Field boolean(std::string key, Member member) {
  return {std::move(key), [member](RunConfig& c, std::string_view v) { std::invoke(member, c) = parse_bool(v); },
          [member](const RunConfig& c) { return std::string(std::invoke(member, c) ? "true" : "false"); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(numeric("env.swarm_rows", [](auto& c) -> auto& { return c.env.swarm_rows; }));
    f.push_back(numeric("env.swarm_cols", [](auto& c) -> auto& { return c.env.swarm_cols; }));
    f.push_back(numeric("env.base_row_reward", [](auto& c) -> auto& { return c.env.base_row_reward; }));
    f.push_back(numeric("env.row_reward_step", [](auto& c) -> auto& { return c.env.row_reward_step; }));
    f.push_back(numeric("env.bonus_reward", [](auto& c) -> auto& { return c.env.bonus_reward; }));
    f.push_back(numeric("env.bonus_spawn_prob", [](auto& c) -> auto& { return c.env.bonus_spawn_prob; }));
    f.push_back(numeric("env.lives", [](auto& c) -> auto& { return c.env.lives; }));
    f.push_back(numeric("env.grid_width", [](auto& c) -> auto& { return c.env.grid_width; }));
    f.push_back(numeric("env.grid_height", [](auto& c) -> auto& { return c.env.grid_height; }));
    f.push_back(numeric("env.swarm_step_period", [](auto& c) -> auto& { return c.env.swarm_step_period; }));
    f.push_back(numeric("env.bomb_prob", [](auto& c) -> auto& { return c.env.bomb_prob; }));
    f.push_back(numeric("env.rng_seed", [](auto& c) -> auto& { return c.env.rng_seed; }));

    f.push_back(numeric("agent.gamma", [](auto& c) -> auto& { return c.agent.gamma; }));
    f.push_back(numeric("agent.n_step", [](auto& c) -> auto& { return c.agent.n_step; }));
    f.push_back(numeric("agent.batch_size", [](auto& c) -> auto& { return c.agent.batch_size; }));
    f.push_back(numeric("agent.target_sync_period", [](auto& c) -> auto& { return c.agent.target_sync_period; }));
    f.push_back(numeric("agent.train_every", [](auto& c) -> auto& { return c.agent.train_every; }));
    f.push_back(numeric("agent.prefill_steps", [](auto& c) -> auto& { return c.agent.prefill_steps; }));
    f.push_back(numeric("agent.total_steps", [](auto& c) -> auto& { return c.agent.total_steps; }));
    f.push_back(numeric("agent.eval_period", [](auto& c) -> auto& { return c.agent.eval_period; }));
    f.push_back(numeric("agent.eval_steps", [](auto& c) -> auto& { return c.agent.eval_steps; }));
    f.push_back(numeric("agent.seed", [](auto& c) -> auto& { return c.agent.seed; }));
    f.push_back(numeric("agent.obs_stack", [](auto& c) -> auto& { return c.agent.obs_stack; }));
    f.push_back(boolean("agent.eval_deterministic", [](auto& c) -> auto& { return c.agent.eval_deterministic; }));
    f.push_back(numeric("agent.max_grad_norm", [](auto& c) -> auto& { return c.agent.max_grad_norm; }));

    f.push_back({"net.trunk_widths",
                 [](RunConfig& c, std::string_view v) { c.agent.net.trunk_widths = parse_int_list(v); },
                 [](const RunConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.agent.net.trunk_widths.size(); ++i) {
                     if (i) out += ",";
                     out += std::to_string(c.agent.net.trunk_widths[i]);
                   }
                   return out;
                 }});
    f.push_back(numeric("net.head_hidden", [](auto& c) -> auto& { return c.agent.net.head_hidden; }));
    f.push_back(numeric("net.sigma0", [](auto& c) -> auto& { return c.agent.net.sigma0; }));

    f.push_back(numeric("support.n_atoms", [](auto& c) -> auto& { return c.agent.support.n_atoms; }));
    f.push_back(numeric("support.v_min", [](auto& c) -> auto& { return c.agent.support.v_min; }));
    f.push_back(numeric("support.v_max", [](auto& c) -> auto& { return c.agent.support.v_max; }));
    f.push_back(numeric("support.return_scale", [](auto& c) -> auto& { return c.agent.support.return_scale; }));

    f.push_back(numeric("optim.learning_rate", [](auto& c) -> auto& { return c.agent.optim.learning_rate; }));
    f.push_back(numeric("optim.beta1", [](auto& c) -> auto& { return c.agent.optim.beta1; }));
    f.push_back(numeric("optim.beta2", [](auto& c) -> auto& { return c.agent.optim.beta2; }));
    f.push_back(numeric("optim.epsilon", [](auto& c) -> auto& { return c.agent.optim.epsilon; }));

    f.push_back(numeric("replay.capacity", [](auto& c) -> auto& { return c.agent.replay.capacity; }));
    f.push_back(numeric("replay.alpha", [](auto& c) -> auto& { return c.agent.replay.alpha; }));
    f.push_back(numeric("replay.beta_start", [](auto& c) -> auto& { return c.agent.replay.beta_start; }));
    f.push_back(numeric("replay.beta_end", [](auto& c) -> auto& { return c.agent.replay.beta_end; }));
    f.push_back(numeric("replay.eps_priority", [](auto& c) -> auto& { return c.agent.replay.eps_priority; }));
    f.push_back(boolean("replay.stratified", [](auto& c) -> auto& { return c.agent.replay.stratified; }));

    f.push_back(numeric("introspection.r_step_max", [](auto& c) -> auto& { return c.introspection.r_step_max; }));
    f.push_back({"introspection.mode",
                 [](RunConfig& c, std::string_view v) {
                   if (v == "static_max") {
                     c.introspection.mode = explain::RsMode::static_max;
                   } else if (v == "adaptive") {
                     c.introspection.mode = explain::RsMode::adaptive;
                   } else {
                     throw ConfigError("introspection.mode must be static_max or adaptive");
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.introspection.mode == explain::RsMode::adaptive ? "adaptive" : "static_max");
                 }});
    f.push_back(boolean("introspection.include_bonus_in_rs",
                        [](auto& c) -> auto& { return c.introspection.include_bonus_in_rs; }));

    f.push_back({"run.out_dir", [](RunConfig& c, std::string_view v) { c.out_dir = std::string(v); },
                 [](const RunConfig& c) { return c.out_dir; }});
    return f;
  }();
  return table;
}

const Field& find_field(std::string_view key) {
  for (const auto& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown key '" + std::string(key) + "'");
}

void assign(RunConfig& config, std::string_view line) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError("expected 'section.key = value'");
  const auto key = trim(line.substr(0, eq));
  find_field(key).set(config, trim(line.substr(eq + 1)));
}

}  // namespace

void RunConfig::validate() const {
  env.validate();
  agent.validate();
  if (introspection.r_step_max < 0.0) throw ConfigError("introspection.r_step_max must be >= 0");
  if (out_dir.empty()) throw ConfigError("run.out_dir must not be empty");
}

RunConfig parse_run_config(std::string_view text, std::string_view source) {
  RunConfig config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      try {
        assign(config, line);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  try {
    config.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path.string());
}

void apply_override(RunConfig& config, std::string_view assignment) {
  try {
    assign(config, trim(assignment));
  } catch (const ConfigError& e) {
    throw ConfigError("--set " + std::string(assignment) + ": " + e.what());
  }
}

std::string serialize(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    const auto dot = f.key.find('.');
    const std::string s = f.key.substr(0, dot);
    if (s != section) {
      if (!section.empty()) out += "\n";
      section = s;
    }
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(f.key);
  return keys;
}

}  // namespace qint::harness
