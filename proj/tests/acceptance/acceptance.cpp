// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "qint/agent/agent.hpp"
#include "qint/agent/training.hpp"
#include "qint/core/rng.hpp"
#include "qint/explain/introspection.hpp"
#include "qint/harness/checkpoint.hpp"
#include "qint/harness/commands.hpp"
#include "qint/harness/log_writer.hpp"
#include "qint/harness/run_config.hpp"
#include "qint/head/rainbow_head.hpp"
#include "qint/replay/nstep.hpp"
#include "qint/replay/prioritized_replay.hpp"
#include "qint/replay/sum_tree.hpp"

namespace fs = std::filesystem;
using namespace qint;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string strf(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------- 1, 2

Outcome probe_values() {
  const double lo = explain::probability_of_success(6.85, 30.0);
  const double hi = explain::probability_of_success(7.15, 30.0);
  const bool near = std::abs(lo - 0.67928) <= 0.0005 && std::abs(hi - 0.68859) <= 0.0005;
  const bool inside = lo >= 0.678 - 0.001 && lo <= 0.688 + 0.001 && hi >= 0.678 - 0.001 && hi <= 0.688 + 0.001;
  return {near && inside, strf("P(6.85,30)=%.5f P(7.15,30)=%.5f", lo, hi)};
}

Outcome probability_properties() {
  Rng rng(2);
  std::uniform_real_distribution<double> q_draw(-1e3, 1e4);
  std::uniform_real_distribution<double> r_draw(0.0, 1e3);
  const double log_ulp = std::nextafter(2.0, 3.0) - 2.0;  // ulp of |log10(1/100)|
  int range_bad = 0, mono_bad = 0, scale_bad = 0, bound_bad = 0;
  double worst_scale = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double r = r_draw(rng);
    while (r <= 0.0) r = r_draw(rng);
    double q1 = q_draw(rng), q2 = q_draw(rng);
    if (q1 > q2) std::swap(q1, q2);
    const double p1 = explain::probability_of_success(q1, r);
    const double p2 = explain::probability_of_success(q2, r);
    if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0)) ++range_bad;
    if (p1 > p2) ++mono_bad;
    for (double c : {1e-3, 1.0, 1e3}) {
      const double d = std::abs(explain::probability_of_success(c * q1, c * r) - p1);
      worst_scale = std::max(worst_scale, d);
      if (d > 0.5 * log_ulp) ++scale_bad;
    }
    if (explain::probability_of_success(r, r) != 1.0) ++bound_bad;
    if (explain::probability_of_success(r / 100.0, r) > 0.5 * log_ulp) ++bound_bad;
  }
  return {range_bad + mono_bad + scale_bad + bound_bad == 0,
          strf("1e5 pairs: range %d, monotone %d, scale %d (max diff %.1e), boundary %d violations", range_bad,
              mono_bad, scale_bad, worst_scale, bound_bad)};
}

// ---------------------------------------------------------------- 3, 4

Outcome dueling_invariants() {
  Rng rng(3);
  std::normal_distribution<double> g(0.0, 3.0);
  double worst_sum = 0.0, worst_shift = 0.0;
  bool negative = false;
  for (int t = 0; t < 10000; ++t) {
    Vector v(51);
    Matrix a(6, 51);
    for (int i = 0; i < 51; ++i) v[i] = g(rng);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
    const auto d = head::dueling_combine(head::DuelingLogits::from_streams(v, a));
    negative |= d.probs.minCoeff() < 0.0;
    for (int r = 0; r < 6; ++r) worst_sum = std::max(worst_sum, std::abs(d.probs.row(r).sum() - 1.0));
    Matrix shifted = a;
    for (int i = 0; i < 51; ++i) shifted.col(i).array() += g(rng);
    const auto s = head::dueling_combine(head::DuelingLogits::from_streams(v, shifted));
    worst_shift = std::max(worst_shift, (s.probs - d.probs).cwiseAbs().maxCoeff());
  }
  return {!negative && worst_sum <= 1e-12 && worst_shift <= 1e-12,
          strf("1e4 logit sets: max |row sum - 1| %.1e, max shift change %.1e, negative %s", worst_sum, worst_shift,
              negative ? "yes" : "no")};
}

// Brute-force interpolation: locate each image by linear scan.
Vector projection_oracle(const Vector& p, const head::AtomSupport& s, double reward, double discount,
                         bool truncated) {
  const int n = s.size();
  Vector out = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    double tz = truncated ? reward : reward + discount * s.atoms()[i];
    tz = std::clamp(tz, s.v_min(), s.v_max());
    bool placed = false;
    for (int k = 0; k < n && !placed; ++k) {
      if (s.atoms()[k] == tz) {
        out[k] += p[i];
        placed = true;
      }
    }
    for (int k = 0; k + 1 < n && !placed; ++k) {
      const double lo = s.atoms()[k], hi = s.atoms()[k + 1];
      if (lo < tz && tz < hi) {
        out[k] += p[i] * (hi - tz) / (hi - lo);
        out[k + 1] += p[i] * (tz - lo) / (hi - lo);
        placed = true;
      }
    }
  }
  return out;
}

Vector random_simplex(Rng& rng, int n) {
  std::exponential_distribution<double> e(1.0);
  Vector p(n);
  for (int i = 0; i < n; ++i) p[i] = e(rng);
  return p / p.sum();
}

Outcome projection() {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, worst_mass = 0.0;
  for (int n : {2, 3, 5}) {
    const head::AtomSupport s(n, -3.0, 3.0);
    for (int t = 0; t < 10000; ++t) {
      const Vector p = random_simplex(rng, n);
      const double reward = -5.0 + 10.0 * u(rng);
      const double discount = u(rng);
      const bool truncated = u(rng) < 0.2;
      const Vector got = head::project_target(p, s, reward, discount, truncated);
      worst = std::max(worst, (got - projection_oracle(p, s, reward, discount, truncated)).cwiseAbs().maxCoeff());
      worst_mass = std::max(worst_mass, std::abs(got.sum() - 1.0));
    }
  }
  return {worst <= 1e-12 && worst_mass <= 1e-12,
          strf("3 x 1e4 cases: max oracle diff %.1e, max mass error %.1e", worst, worst_mass)};
}

// ---------------------------------------------------------------- 5

Outcome gradient_check() {
  Rng rng(5);
  std::uniform_int_distribution<int> width(8, 16);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    net::NetworkSpec spec;
    spec.input_dim = 6;
    spec.trunk_widths = {width(rng)};
    spec.head_hidden = k % 2 == 0 ? 0 : width(rng);
    spec.n_actions = 6;
    spec.n_atoms = 11;
    auto net = net::Network::build(spec, rng);
    net.resample_noise(rng);

    const int batch = 3;
    Matrix obs(batch, spec.input_dim);
    for (Eigen::Index i = 0; i < obs.size(); ++i) obs.data()[i] = u(rng);
    std::vector<int> actions;
    std::vector<double> weights;
    Matrix targets(batch, spec.n_atoms);
    for (int i = 0; i < batch; ++i) {
      actions.push_back((k + i) % 6);
      weights.push_back(0.5 + 0.25 * (u(rng) + 1.0));
      targets.row(i) = random_simplex(rng, spec.n_atoms).transpose();
    }
    const auto loss_of = [&] {
      return agent::distributional_loss(net, obs, actions, targets, weights, false).loss;
    };
    const auto grads = agent::distributional_loss(net, obs, actions, targets, weights, false).grads;
    auto params = net.parameters();
    const double h = 1e-5;
    for (std::size_t t = 0; t < params.size(); ++t) {
      for (std::size_t j = 0; j < params[t].values.size(); ++j) {
        double& w = params[t].values[j];
        const double saved = w;
        w = saved + h;
        const double up = loss_of();
        w = saved - h;
        const double down = loss_of();
        w = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double analytic = grads[t][static_cast<Eigen::Index>(j)];
        const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-4});
        worst = std::max(worst, std::abs(numeric - analytic) / scale);
      }
    }
  }
  return {worst < 1e-5, strf("20 networks: max relative error %.2e", worst)};
}

// ---------------------------------------------------------------- 6

std::vector<replay::Transition> nstep_oracle(const std::vector<double>& rewards, const std::vector<bool>& resets,
                                             int n, double gamma) {
  const int len = static_cast<int>(rewards.size());
  std::vector<std::pair<int, replay::Transition>> keyed;
  for (int t = 0; t < len; ++t) {
    replay::Transition tr;
    tr.obs = {static_cast<double>(t)};
    tr.action = t % 6;
    double weight = 1.0;
    int j = 0;
    bool closed = false;
    for (; j < n && t + j < len; ++j) {
      tr.n_step_reward += weight * rewards[static_cast<std::size_t>(t + j)];
      weight *= gamma;
      if (resets[static_cast<std::size_t>(t + j)]) {
        tr.truncated = true;
        closed = true;
        break;
      }
    }
    if (!closed) {
      if (j < n) continue;
      --j;
      tr.discount = std::pow(gamma, n);
    }
    tr.next_obs = {static_cast<double>(t + j + 1)};
    keyed.emplace_back(t + j, tr);
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<replay::Transition> out;
  for (auto& [_, tr] : keyed) out.push_back(std::move(tr));
  return out;
}

Outcome replay_checks() {
  Rng rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  replay::SumTree tree(1000);
  std::vector<double> leaves(1000, 0.0);
  double worst_root = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto leaf = static_cast<std::size_t>(u(rng) * 1000.0) % 1000;
    leaves[leaf] = u(rng) * 100.0;
    tree.set(leaf, leaves[leaf]);
    double sum = 0.0;
    if (i % 100 == 99) {
      for (double v : leaves) sum += v;
      worst_root = std::max(worst_root, std::abs(tree.total() - sum));
    }
  }
  double sum = 0.0;
  for (double v : leaves) sum += v;
  worst_root = std::max(worst_root, std::abs(tree.total() - sum));

  replay::ReplayConfig rc;
  rc.capacity = 8;
  rc.alpha = 1.0;
  rc.eps_priority = 1e-12;
  replay::PrioritizedReplay buffer(rc);
  std::vector<double> prio = {1.0, 2.0, 0.5, 4.0, 3.0, 1.5, 6.0, 2.5};
  std::vector<std::size_t> idx;
  std::vector<double> td;
  for (std::size_t i = 0; i < 8; ++i) {
    replay::Transition t;
    t.obs = {static_cast<double>(i)};
    idx.push_back(buffer.add(t));
    td.push_back(prio[i] - rc.eps_priority);
  }
  buffer.update(idx, td);
  std::vector<double> hits(8, 0.0);
  const int draws = 1000000, batch = 8;
  for (int d = 0; d < draws / batch; ++d) {
    for (auto s : buffer.sample(batch, 0.5, rng).indices) hits[s] += 1.0;
  }
  double total = 0.0;
  for (double p : prio) total += p;
  double worst_freq = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    const double expected = prio[i] / total;
    worst_freq = std::max(worst_freq, std::abs(hits[i] / draws - expected) / expected);
  }

  int mismatched = 0;
  for (int s = 0; s < 1000; ++s) {
    const int n = 1 + s % 5;
    const double gamma = 0.5 + 0.5 * u(rng);
    const int len = 1 + static_cast<int>(u(rng) * 80);
    std::vector<double> rewards;
    std::vector<bool> resets;
    for (int t = 0; t < len; ++t) {
      rewards.push_back(u(rng) < 0.5 ? 0.0 : std::floor(u(rng) * 40.0) * 0.5);
      resets.push_back(u(rng) < 0.08);
    }
    replay::NStepAccumulator acc(n, gamma);
    std::vector<replay::Transition> got;
    for (int t = 0; t < len; ++t) {
      for (auto& tr : acc.push({static_cast<double>(t)}, t % 6, rewards[static_cast<std::size_t>(t)],
                               {static_cast<double>(t + 1)}, resets[static_cast<std::size_t>(t)])) {
        got.push_back(std::move(tr));
      }
    }
    if (got != nstep_oracle(rewards, resets, n, gamma)) ++mismatched;
  }

  return {worst_root <= 1e-9 && worst_freq <= 0.02 && mismatched == 0,
          strf("root error %.1e, worst frequency error %.2f%%, n-step mismatches %d/1000", worst_root,
              100.0 * worst_freq, mismatched)};
}

// ---------------------------------------------------------------- 7

// Two states (one-hot observations), two actions. Each parameterization draws
// online and target categorical distributions per (state, action).
Outcome double_q_oracle() {
  Rng rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const head::AtomSupport s(11, -2.0, 2.0);
  double worst = 0.0;
  int calls_bad = 0;
  for (int k = 0; k < 100; ++k) {
    Matrix online[2], target[2];
    for (int st = 0; st < 2; ++st) {
      online[st] = Matrix(2, s.size());
      target[st] = Matrix(2, s.size());
      for (int a = 0; a < 2; ++a) {
        online[st].row(a) = random_simplex(rng, s.size()).transpose();
        target[st].row(a) = random_simplex(rng, s.size()).transpose();
      }
    }
    int select_calls = 0, evaluate_calls = 0;
    const auto table = [](const Matrix* dists, int& calls) {
      return [dists, &calls](const Matrix& obs) {
        ++calls;
        std::vector<head::CategoricalValueDistribution> out;
        for (Eigen::Index i = 0; i < obs.rows(); ++i) out.push_back({dists[obs(i, 0) > 0.5 ? 0 : 1]});
        return out;
      };
    };

    std::vector<replay::Transition> batch;
    for (int st = 0; st < 2; ++st) {
      for (int a = 0; a < 2; ++a) {
        const int next = (st + a) % 2;
        replay::Transition t;
        t.obs = {st == 0 ? 1.0 : 0.0, st == 1 ? 1.0 : 0.0};
        t.action = a;
        t.next_obs = {next == 0 ? 1.0 : 0.0, next == 1 ? 1.0 : 0.0};
        t.n_step_reward = -1.0 + 2.0 * u(rng);
        t.truncated = u(rng) < 0.25;
        t.discount = t.truncated ? 0.0 : std::pow(0.99, 3);
        batch.push_back(t);
      }
    }
    const Matrix got =
        agent::compute_targets(batch, table(online, select_calls), table(target, evaluate_calls), s);
    if (select_calls != 1 || evaluate_calls != 1) ++calls_bad;

    for (std::size_t i = 0; i < batch.size(); ++i) {
      const int next = batch[i].next_obs[0] > 0.5 ? 0 : 1;
      double q[2];
      for (int a = 0; a < 2; ++a) {
        q[a] = 0.0;
        for (int j = 0; j < s.size(); ++j) q[a] += online[next](a, j) * s.atoms()[j];
      }
      const int best = q[1] > q[0] ? 1 : 0;
      const Vector want = projection_oracle(target[next].row(best).transpose(), s, batch[i].n_step_reward,
                                            batch[i].discount, batch[i].truncated);
      worst = std::max(worst, (got.row(static_cast<Eigen::Index>(i)).transpose() - want).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-12 && calls_bad == 0,
          strf("100 parameterizations: max diff %.1e, call-count violations %d", worst, calls_bad)};
}

// ---------------------------------------------------------------- 8, 9

struct SeedResult {
  std::uint64_t seed = 0;
  double greedy = 0.0;
  double random = 0.0;
  int clears = 0;
  bool pass = false;
};

constexpr int kEvalSegments = 5;

harness::RunConfig learning_config(std::uint64_t seed) {
  harness::RunConfig c;
  c.env.swarm_rows = 4;
  c.env.swarm_cols = 4;
  c.agent.seed = seed;
  return c;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Trains unless the run directory already holds a final checkpoint for the
// identical config.
void ensure_trained(const harness::RunConfig& config, const harness::RunPaths& paths, bool fresh) {
  if (!fresh && fs::exists(paths.final_checkpoint()) && read_file(paths.config()) == harness::serialize(config)) {
    std::cout << "  reusing " << paths.root.string() << '\n';
    return;
  }
  fs::remove_all(paths.root);
  const auto t0 = std::chrono::steady_clock::now();
  harness::train_run(config, paths);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << strf("  trained %s in %.0f s", paths.root.string().c_str(), secs) << std::endl;
}

SeedResult evaluate_seed(const harness::RunConfig& config, const harness::RunPaths& paths) {
  const auto net = harness::network_from_checkpoint(harness::load_checkpoint(paths.final_checkpoint()),
                                                    config.agent.net.sigma0);
  const double r_s = agent::resolve_r_s(config.introspection, config.env);
  SeedResult r;
  r.seed = config.agent.seed;
  for (int k = 0; k < kEvalSegments; ++k) {
    const std::uint64_t seed = agent::evaluation_seed(config.agent) + static_cast<std::uint64_t>(k);
    const auto g = agent::run_evaluation(net, config.agent, config.env, r_s, config.agent.eval_steps, seed,
                                         agent::EvalPolicy::greedy);
    const auto b = agent::run_evaluation(net, config.agent, config.env, r_s, config.agent.eval_steps, seed,
                                         agent::EvalPolicy::uniform_random);
    r.greedy += g.avg_reward / kEvalSegments;
    r.random += b.avg_reward / kEvalSegments;
    r.clears += g.swarm_clears;
  }
  r.pass = r.greedy >= 3.0 * r.random && r.clears >= 1;
  return r;
}

Outcome learning(const fs::path& work, int seeds, bool fresh) {
  int passed = 0;
  std::string per_seed;
  for (int s = 1; s <= seeds; ++s) {
    const auto config = learning_config(static_cast<std::uint64_t>(s));
    const harness::RunPaths paths{work / strf("seed_%d", s)};
    ensure_trained(config, paths, fresh);
    const auto r = evaluate_seed(config, paths);
    passed += r.pass;
    std::cout << strf("  seed %d: greedy %.1f random %.1f ratio %.2f clears %d %s", s, r.greedy, r.random,
                     r.greedy / r.random, r.clears, r.pass ? "ok" : "short")
              << std::endl;
    per_seed += strf("%s%.2f", per_seed.empty() ? "" : ",", r.greedy / r.random);
  }
  const int needed = seeds >= 9 ? 7 : (7 * seeds + 8) / 9;
  return {passed >= needed, strf("%d/%d seeds reach 3x random with a clear (need %d); ratios %s", passed, seeds,
                                needed, per_seed.c_str())};
}

std::vector<std::vector<double>> read_csv_rows(const fs::path& path, std::size_t& columns) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

Outcome explain_artifact(const fs::path& work, bool fresh) {
  const auto config = learning_config(1);
  const harness::RunPaths paths{work / "seed_1"};
  ensure_trained(config, paths, fresh);

  harness::CommandOptions ex;
  ex.checkpoint = paths.final_checkpoint();
  ex.out = paths.root / "explain";
  std::ostringstream ex_out, err;
  const auto t0 = std::chrono::steady_clock::now();
  if (harness::cmd_explain(ex, ex_out, err) != harness::kExitOk) return {false, "explain failed: " + err.str()};
  harness::CommandOptions pl;
  pl.run_dir = paths.root;
  std::ostringstream pl_out;
  if (harness::cmd_plot(pl, pl_out, err) != harness::kExitOk) return {false, "plot failed: " + err.str()};
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::size_t columns = 0;
  const auto rows = read_csv_rows(paths.root / "plots" / "ps.csv", columns);
  bool in_range = columns == 7 && !rows.empty();
  for (const auto& row : rows) {
    in_range &= row.size() == 7;
    for (std::size_t a = 1; a < row.size(); ++a) in_range &= row[a] >= 0.0 && row[a] <= 1.0;
  }

  // Segment ordering against the logged probe Q-values.
  std::vector<std::vector<double>> qs;
  for (const auto& r : harness::read_log(paths.log())) {
    if (r.at("kind") == "eval") qs.push_back(r.at("q").get<std::vector<double>>());
  }
  int order_bad = 0;
  if (qs.size() != rows.size()) ++order_bad;
  for (std::size_t k = 0; k < std::min(qs.size(), rows.size()); ++k) {
    for (std::size_t a = 0; a < 6 && rows[k].size() == 7; ++a) {
      for (std::size_t b = 0; b < 6; ++b) {
        if (qs[k][a] >= qs[k][b] && rows[k][a + 1] < rows[k][b + 1]) ++order_bad;
      }
    }
  }

  const auto rec = explain::record_from_json(nlohmann::json::parse(ex_out.str()));
  const double best_ps = *std::max_element(rec.ps_values.begin(), rec.ps_values.end());
  const bool argmax_ok = rec.ps_values[static_cast<std::size_t>(rec.chosen_action)] == best_ps;

  std::string ps_text;
  for (double p : rec.ps_values) ps_text += strf("%s%.3f", ps_text.empty() ? "" : " ", p);
  return {in_range && order_bad == 0 && argmax_ok && secs < 5.0,
          strf("%zu segments, ps in [0,1]: %s, ordering violations %d, argmax kept: %s, final probe ps [%s], %.2f s",
              rows.size(), in_range ? "yes" : "no", order_bad, argmax_ok ? "yes" : "no", ps_text.c_str(), secs)};
}

std::vector<int> parse_criteria(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      out.push_back(std::stoi(part));
    } else {
      for (int k = std::stoi(part.substr(0, dash)); k <= std::stoi(part.substr(dash + 1)); ++k) out.push_back(k);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string criteria = "1-9";
  std::string work = "acceptance_runs";
  int seeds = 9;
  bool fresh = false;
  app.add_option("--criteria", criteria, "criteria to run, e.g. 1-7 or 8,9");
  app.add_option("--work", work, "directory for training runs");
  app.add_option("--seeds", seeds, "number of learning seeds")->check(CLI::Range(1, 100));
  app.add_flag("--fresh", fresh, "retrain even when a matching run exists");
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::pair<std::string, std::function<Outcome()>>> table = {
      {1, {"probe values", probe_values}},
      {2, {"probability properties", probability_properties}},
      {3, {"dueling invariants", dueling_invariants}},
      {4, {"projection oracle", projection}},
      {5, {"gradient check", gradient_check}},
      {6, {"replay", replay_checks}},
      {7, {"double-Q targets", double_q_oracle}},
      {8, {"learning", [&] { return learning(work, seeds, fresh); }}},
      {9, {"explainability artifact", [&] { return explain_artifact(work, false); }}},
  };

  spdlog::set_level(spdlog::level::warn);
  bool all = true;
  for (int id : parse_criteria(criteria)) {
    const auto it = table.find(id);
    if (it == table.end()) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << it->second.first << "): " << o.detail
              << strf(" [%.1f s]", secs) << std::endl;
    all &= o.pass;
  }
  return all ? 0 : 1;
}
