#include "qint/harness/commands.hpp"

#include <cstdio>
#include <fstream>

#include <spdlog/spdlog.h>

#include "qint/core/errors.hpp"
#include "qint/env/observation.hpp"
#include "qint/harness/checkpoint.hpp"
#include "qint/harness/log_writer.hpp"
#include "qint/harness/plot.hpp"

namespace qint::harness {

namespace fs = std::filesystem;

namespace {

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CheckpointError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckpoint;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

void create_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

// checkpoints/<file> inside a run directory, or a bare file beside config.txt.
std::optional<fs::path> run_root_of(const fs::path& checkpoint) {
  for (fs::path dir : {checkpoint.parent_path().parent_path(), checkpoint.parent_path()}) {
    if (fs::exists(RunPaths{dir}.config())) return dir;
  }
  return std::nullopt;
}

net::NetworkSpec network_spec(const RunConfig& config) {
  net::NetworkSpec spec;
  spec.input_dim = config.agent.obs_stack * env::frame_size(config.env);
  spec.trunk_widths = config.agent.net.trunk_widths;
  spec.head_hidden = config.agent.net.head_hidden;
  spec.n_actions = env::kActionCount;
  spec.n_atoms = config.agent.support.n_atoms;
  spec.sigma0 = config.agent.net.sigma0;
  return spec;
}

net::Network load_network(const RunConfig& config, const fs::path& path) {
  net::Network net = network_from_checkpoint(load_checkpoint(path), config.agent.net.sigma0);
  const auto expected = network_spec(config);
  if (net.spec().input_dim != expected.input_dim) {
    throw ConfigError("checkpoint expects " + std::to_string(net.spec().input_dim) +
                      " inputs but the config produces " + std::to_string(expected.input_dim));
  }
  if (net.spec().n_atoms != expected.n_atoms || net.spec().n_actions != env::kActionCount) {
    throw ConfigError("checkpoint head does not match support.n_atoms and the action set");
  }
  return net;
}

class RunRecorder : public agent::TrainingObserver {
 public:
  RunRecorder(const RunPaths& paths, const RunConfig& config) : paths_(paths), config_(config), log_(paths.log()) {
    log_.write(meta_record(serialize(config), config.agent.seed));
  }

  void on_step(const agent::StepRecord& r) override { log_.write(step_record(r)); }
  void on_train(const agent::TrainRecord& r) override { log_.write(train_record(r)); }

  void on_evaluation(const agent::EvalReport& report, const agent::Agent& agent, std::int64_t env_steps) override {
    log_.write(eval_record(report));
    log_.flush();
    const auto ck = make_checkpoint(agent.online(), static_cast<std::uint64_t>(env_steps), agent.rng());
    save_checkpoint(ck, paths_.segment_checkpoint(report.segment));
    if (env_steps == config_.agent.total_steps) save_checkpoint(ck, paths_.final_checkpoint());
    spdlog::info("segment {} at step {}: reward {} clears {}", report.segment, env_steps, report.avg_reward,
                 report.swarm_clears);
  }

 private:
  RunPaths paths_;
  const RunConfig& config_;
  LogWriter log_;
};

std::int64_t parse_step_index(const std::string& text) {
  std::size_t used = 0;
  long long v = -1;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v < 0) throw ConfigError("--state must be 'initial' or a step index, got '" + text + "'");
  return v;
}

}  // namespace

fs::path RunPaths::segment_checkpoint(std::int64_t segment) const {
  char name[32];
  std::snprintf(name, sizeof name, "segment_%04lld.qint", static_cast<long long>(segment));
  return checkpoints() / name;
}

RunConfig resolve_config(const CommandOptions& options) {
  RunConfig config;
  if (options.config) {
    config = load_run_config(*options.config);
  } else if (options.checkpoint) {
    if (const auto root = run_root_of(*options.checkpoint)) config = load_run_config(RunPaths{*root}.config());
  }
  for (const auto& o : options.overrides) apply_override(config, o);
  if (options.seed) config.agent.seed = *options.seed;
  config.validate();
  return config;
}

agent::TrainingSummary train_run(const RunConfig& config, const RunPaths& paths) {
  create_dirs(paths.checkpoints());
  write_text(paths.config(), serialize(config));
  RunRecorder recorder(paths, config);
  return agent::run_training(config.agent, config.env, config.introspection, recorder);
}

int cmd_train(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = resolve_config(options);
    const RunPaths paths{options.out ? *options.out : fs::path(config.out_dir)};
    const auto summary = train_run(config, paths);
    out << nlohmann::json{{"run_dir", paths.root.string()},
                          {"env_steps", summary.env_steps},
                          {"learn_steps", summary.learn_steps},
                          {"evaluations", summary.evaluations.size()}}
               .dump()
        << '\n';
  });
}

int cmd_eval(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = resolve_config(options);
    agent::EvalPolicy policy;
    if (options.policy == "greedy") {
      policy = agent::EvalPolicy::greedy;
    } else if (options.policy == "noisy") {
      policy = agent::EvalPolicy::noisy;
    } else if (options.policy == "random") {
      policy = agent::EvalPolicy::uniform_random;
    } else {
      throw ConfigError("--policy must be greedy, noisy or random");
    }

    net::Network net;
    if (options.checkpoint) {
      net = load_network(config, *options.checkpoint);
    } else if (policy == agent::EvalPolicy::uniform_random) {
      net = net::Network::zeros(network_spec(config));
    } else {
      throw ConfigError("eval needs --checkpoint unless --policy random");
    }

    const std::int64_t steps = options.steps ? *options.steps : config.agent.eval_steps;
    if (steps < 1) throw ConfigError("--steps must be positive");
    const std::uint64_t seed = options.seed ? *options.seed : agent::evaluation_seed(config.agent);
    const double r_s = agent::resolve_r_s(config.introspection, config.env);
    const auto report = agent::run_evaluation(net, config.agent, config.env, r_s, steps, seed, policy);

    const auto record = eval_record(report);
    out << record.dump() << '\n';
    if (options.out) {
      create_dirs(*options.out);
      LogWriter(*options.out / "log.jsonl", true).write(record);
    }
  });
}

int cmd_explain(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!options.checkpoint) throw ConfigError("explain needs --checkpoint");
    const RunConfig config = resolve_config(options);
    const net::Network net = load_network(config, *options.checkpoint);
    const auto support = config.agent.support.atoms();
    const env::MiniInvaders game(config.env);

    const std::vector<std::string> states = options.states.empty() ? std::vector<std::string>{"initial"}
                                                                   : options.states;

    std::vector<nlohmann::json> steps;  // step records of the run log, loaded on first use
    bool steps_loaded = false;
    auto load_steps = [&] {
      if (steps_loaded) return;
      fs::path log_path;
      if (options.log) {
        log_path = *options.log;
      } else if (const auto root = run_root_of(*options.checkpoint)) {
        log_path = RunPaths{*root}.log();
      } else {
        throw ConfigError("log replay needs --log or a checkpoint inside a run directory");
      }
      for (auto& r : read_log(log_path)) {
        if (r.value("kind", "") == "step") steps.push_back(std::move(r));
      }
      steps_loaded = true;
    };

    std::vector<nlohmann::json> records;
    for (const auto& source : states) {
      std::vector<double> obs;
      std::int64_t step_index = 0;
      explain::IntrospectionConfig intro = config.introspection;
      if (source == "initial") {
        obs = agent::probe_observation(config.env, config.agent.obs_stack);
      } else {
        step_index = parse_step_index(source);
        load_steps();
        if (step_index > static_cast<std::int64_t>(steps.size())) {
          throw ConfigError("step index " + source + " beyond the " + std::to_string(steps.size()) +
                            " logged steps");
        }
        env::GameState state = game.initial_state(agent::training_env_seed(config.agent, config.env));
        env::ObservationStack stack =
            env::observe(config.env, state, env::ObservationStack(config.agent.obs_stack));
        for (std::int64_t i = 0; i < step_index; ++i) {
          const auto& rec = steps[static_cast<std::size_t>(i)];
          auto [next, outcome] = game.step(state, rec.at("action").get<int>());
          if (rec.at("step").get<std::int64_t>() != i || outcome.reward != rec.at("reward").get<double>()) {
            throw ConfigError("log does not replay under this config at step " + std::to_string(i));
          }
          if (intro.mode == explain::RsMode::adaptive) intro = explain::adaptive_update(intro, outcome.reward);
          state = std::move(next);
          stack = env::observe(config.env, state, std::move(stack));
        }
        obs = stack.flatten();
      }

      const Vector q = agent::q_values(net, obs, support, true);
      std::vector<double> q_reward(q.data(), q.data() + q.size());
      for (double& v : q_reward) v *= config.agent.support.return_scale;
      intro.r_step_max = agent::resolve_r_s(intro, config.env);
      const auto record = explain::explain(q_reward, intro, agent::argmax(q), step_index);
      records.push_back(explain::to_json(record));
      out << records.back().dump() << '\n';
    }

    if (options.out) {
      create_dirs(*options.out);
      LogWriter writer(*options.out / "explain.jsonl");
      for (const auto& r : records) writer.write(r);
    }
  });
}

int cmd_plot(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!options.run_dir) throw ConfigError("plot needs a run directory");
    const RunPaths paths{*options.run_dir};
    const auto series = series_from_log(read_log(paths.log()));
    const fs::path dir = options.out ? *options.out : paths.root / "plots";
    write_plots(series, dir);
    out << nlohmann::json{{"reward_csv", (dir / "reward.csv").string()},
                          {"ps_csv", (dir / "ps.csv").string()},
                          {"segments", series.segments.size()}}
               .dump()
        << '\n';
  });
}

}  // namespace qint::harness
