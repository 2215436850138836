// qint: train, evaluate, explain and plot mini-invaders agents.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "qint/harness/commands.hpp"

namespace {

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("qint");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("QINT_LOG_LEVEL")) {
    const std::string l = level;
    if (l == "error") {
      spdlog::set_level(spdlog::level::err);
    } else if (l == "debug") {
      spdlog::set_level(spdlog::level::debug);
    } else if (l != "info") {
      spdlog::warn("QINT_LOG_LEVEL must be error, info or debug; using info");
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  using qint::harness::CommandOptions;

  CLI::App app{"Mini-invaders Rainbow agent with probability-of-success explanations"};
  app.require_subcommand(1);
  CommandOptions opt;

  std::string config, out, checkpoint, log, run_dir;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "run-config file");
    cmd->add_option("--set", opt.overrides, "section.key=value override (repeatable)");
    cmd->add_option("--seed", opt.seed, "seed");
  };

  auto* train = app.add_subcommand("train", "train an agent into a run directory");
  common(train);
  train->add_option("--out", out, "run directory (default: run.out_dir)");

  auto* eval = app.add_subcommand("eval", "greedy evaluation of a checkpoint");
  common(eval);
  eval->add_option("--checkpoint", checkpoint, "checkpoint file");
  eval->add_option("--steps", opt.steps, "evaluation steps (default: agent.eval_steps)");
  eval->add_option("--policy", opt.policy, "greedy, noisy or random")->check(CLI::IsMember({"greedy", "noisy", "random"}));
  eval->add_option("--out", out, "directory whose log.jsonl receives the eval record");

  auto* explain = app.add_subcommand("explain", "probability of success per action at chosen states");
  common(explain);
  explain->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  explain->add_option("--state", opt.states, "'initial' or a logged step index (repeatable)");
  explain->add_option("--log", log, "run log for step replay (default: the checkpoint's run)");
  explain->add_option("--out", out, "directory for explain.jsonl");

  auto* plot = app.add_subcommand("plot", "reward and probability-of-success curves from a run");
  plot->add_option("run_dir", run_dir, "run directory")->required();
  plot->add_option("--out", out, "output directory (default: RUN_DIR/plots)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qint::harness::kExitConfig;
  }

  if (!config.empty()) opt.config = config;
  if (!out.empty()) opt.out = out;
  if (!checkpoint.empty()) opt.checkpoint = checkpoint;
  if (!log.empty()) opt.log = log;
  if (!run_dir.empty()) opt.run_dir = run_dir;
  const auto* used = app.get_subcommands().front();

  if (used == train) return qint::harness::cmd_train(opt, std::cout, std::cerr);
  if (used == eval) return qint::harness::cmd_eval(opt, std::cout, std::cerr);
  if (used == explain) return qint::harness::cmd_explain(opt, std::cout, std::cerr);
  return qint::harness::cmd_plot(opt, std::cout, std::cerr);
}
