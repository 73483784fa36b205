// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "qadra/agent/exploration.hpp"
#include "qadra/agent/qadra_policy.hpp"
#include "qadra/common/rng.hpp"
#include "qadra/harness/config.hpp"
#include "qadra/harness/evaluation.hpp"
#include "qadra/harness/training.hpp"
#include "qadra/replay/replay_buffer.hpp"
#include "qadra/sim/fd_scheduler.hpp"

namespace qadra::acceptance {
namespace {

namespace fs = std::filesystem;
using harness::ExperimentConfig;

// Criterion 1
constexpr int kGradSeeds = 10;
constexpr double kGradMaxRelError = 1e-4;
constexpr double kGradMaxSeconds = 60.0;
// Criterion 2
constexpr double kToyMinSorted = 0.95;
constexpr std::int64_t kToyMaxLearnerSteps = 50000;
constexpr double kToyMaxSeconds = 600.0;
constexpr std::uint64_t kToyHeldOutSeed = 1000;
// Criterion 3. The drop threshold was recalibrated once against the analytic
// round-robin oracle below (11.5% at 20 users) and is pinned here.
constexpr double kStarvationMinDrop = 0.10;
constexpr double kStarvationOracleTol = 0.01;     // |measured drop - oracle drop|
constexpr double kStarvationPeakRelTol = 0.005;   // bler-0 throughput vs oracle
constexpr std::int64_t kStarvationTtis = 20000;
// Criteria 4, 5 and 9
constexpr std::uint64_t kSeeds[] = {1, 2, 3};
constexpr std::uint64_t kEvalSeedOffset = 1000;
constexpr double kPreferenceMaxSeconds = 3600.0;
constexpr double kMonotonicityWeights[] = {1.0, 0.1, 0.01};
// Criterion 6
constexpr int kReplayDraws = 100000;
constexpr double kReplayRelTol = 0.05;
constexpr double kReplayAlpha = 0.6;
constexpr double kChiSquareMinP = 0.01;
// Criterion 7
constexpr int kFuzzLists = 10000;
// Criterion 8
constexpr double kEpsilonUlps = 2.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Context {
  fs::path work_dir;
  fs::path config_dir;

  ExperimentConfig profile(const std::string& name) const { return harness::load_config(config_dir / (name + ".ini")); }
};

Outcome gradients(const Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t params = 0;
  const std::pair<agent::TargetMode, agent::DiscountMode> modes[] = {
      {agent::TargetMode::kDouble, agent::DiscountMode::kPerStep},
      {agent::TargetMode::kVanilla, agent::DiscountMode::kPerStep},
      {agent::TargetMode::kDouble, agent::DiscountMode::kPerTti},
  };
  for (int seed = 1; seed <= kGradSeeds; ++seed) {
    for (const auto& [target, discount] : modes) {
      const auto r = testing::gradient_check(static_cast<std::uint64_t>(seed), target, discount);
      worst = std::max(worst, r.max_rel_error);
      params = r.n_params;
    }
  }
  const double s = seconds_since(t0);
  return {worst < kGradMaxRelError && s < kGradMaxSeconds,
          fmt("max rel error %.3g over %d seeds x 3 loss variants, %zu params, %.1f s", worst, kGradSeeds, params, s)};
}

Outcome toy_sort(const Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  auto c = ctx.profile("toy_sort");
  const auto r = harness::run_training(c, ctx.work_dir / "c2");
  const auto toy = harness::evaluate_toy(c, r.checkpoint.params, agent::stats_from_checkpoint(r.checkpoint), kToyHeldOutSeed);
  const double s = seconds_since(t0);
  return {toy.fraction() >= kToyMinSorted && r.learner_steps <= kToyMaxLearnerSteps && s <= kToyMaxSeconds,
          fmt("sorted %d/%d held-out lists after %lld learner steps, %.0f s", toy.sorted, toy.lists,
              static_cast<long long>(r.learner_steps), s)};
}

// Round robin with in-phase VoIP arrivals and bler 0. Each 40-TTI period the
// 2n VoIP flows outrank the full-buffer flow: floor(2n/C) TTIs carry VoIP
// only, then one TTI shares the grid between the remaining r VoIP flows
// (highest ids; ceil(r/2) of them downlink) and the full-buffer flow.
double rr_oracle_dl_bps(const sim::ResourceGridConfig& g, const sim::TrafficConfig& tr) {
  const std::int64_t flows = 2 * tr.n_voip_users;
  const std::int64_t blocked = flows / g.pdcch_capacity;
  const std::int64_t rest = flows % g.pdcch_capacity;
  const std::int64_t full = tr.voip_period_ttis - blocked - (rest > 0 ? 1 : 0);
  std::int64_t bits = full * g.prbs_per_direction * g.bits_per_prb + tr.n_voip_users * tr.voip_packet_bits;
  if (rest > 0) bits += (g.prbs_per_direction - (rest + 1) / 2) * g.bits_per_prb;
  return static_cast<double>(bits) / (static_cast<double>(tr.voip_period_ttis) * g.tti_duration_s);
}

Outcome starvation(const Context&) {
  ExperimentConfig c;
  c.policy.name = "round_robin";
  c.eval.ttis = kStarvationTtis;
  const std::vector<int> counts{0, 5, 10, 15, 20};
  const auto rows = harness::starvation_sweep(c, counts, 1);
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    monotone = monotone && rows[i].mean_dl_throughput_bps <= rows[i - 1].mean_dl_throughput_bps;
  }
  const double drop = 1.0 - rows.back().mean_dl_throughput_bps / rows.front().mean_dl_throughput_bps;

  auto clean = c;
  clean.grid.bler = 0.0;
  const auto clean_rows = harness::starvation_sweep(clean, counts, 1);
  double worst_rel = 0.0;
  for (const auto& row : clean_rows) {
    clean.scenario.n_voip = row.n_voip;
    const double oracle = rr_oracle_dl_bps(clean.resource_grid(), clean.traffic());
    worst_rel = std::max(worst_rel, std::abs(row.mean_dl_throughput_bps - oracle) / oracle);
  }
  clean.scenario.n_voip = 0;
  const double peak = rr_oracle_dl_bps(clean.resource_grid(), clean.traffic());
  clean.scenario.n_voip = 20;
  const double oracle_drop = 1.0 - rr_oracle_dl_bps(clean.resource_grid(), clean.traffic()) / peak;

  std::ostringstream curve;
  for (const auto& row : rows) curve << ' ' << row.n_voip << ':' << fmt("%.3f", row.mean_dl_throughput_bps / 1e6);
  const bool pass = monotone && drop >= kStarvationMinDrop && std::abs(drop - oracle_drop) < kStarvationOracleTol &&
                    worst_rel < kStarvationPeakRelTol;
  return {pass, fmt("drop %.4f (oracle %.4f, threshold %.2f), bler-0 oracle rel err %.2g, Mbit/s%s", drop, oracle_drop,
                    kStarvationMinDrop, worst_rel, curve.str().c_str())};
}

struct PolicyRun {
  double mean_bps = 0.0;
  double median_bps = 0.0;
  double delayed = 0.0;
};

PolicyRun train_and_eval(const Context& ctx, ExperimentConfig c, std::vector<double> preference, std::uint64_t seed,
                         const std::string& tag) {
  c.reward.preference = std::move(preference);
  c.run.seed = seed;
  const auto dir = ctx.work_dir / tag;
  const auto r = harness::run_training(c, dir);
  auto policy = harness::make_policy(c, r.checkpoint_path);
  const auto e = harness::run_eval(c, *policy, seed + kEvalSeedOffset);
  harness::write_eval_outputs(dir / "eval", e);
  std::fprintf(stderr, "  %s: mean %.4f Mbit/s, median %.4f Mbit/s, delayed %.5f\n", tag.c_str(),
               e.summary.mean_dl_throughput_bps / 1e6, e.summary.dl_throughput_p50_bps / 1e6,
               e.summary.delayed_fraction);
  return {e.summary.mean_dl_throughput_bps, e.summary.dl_throughput_p50_bps, e.summary.delayed_fraction};
}

Outcome preference_extremes(const Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto smoke = ctx.profile("smoke");
  int votes = 0;
  std::string detail;
  for (auto seed : kSeeds) {
    const auto fb = train_and_eval(ctx, smoke, {1.0, 0.0}, seed, fmt("c4/s%llu_fb", static_cast<unsigned long long>(seed)));
    const auto vo = train_and_eval(ctx, smoke, {0.0, 1.0}, seed, fmt("c4/s%llu_voip", static_cast<unsigned long long>(seed)));
    const bool ok = fb.mean_bps > vo.mean_bps && vo.delayed < fb.delayed;
    votes += ok;
    detail += fmt(" [seed %llu %s: %.3f vs %.3f Mbit/s, delayed %.4f vs %.4f]", static_cast<unsigned long long>(seed),
                  ok ? "ok" : "no", fb.mean_bps / 1e6, vo.mean_bps / 1e6, fb.delayed, vo.delayed);
  }
  const double s = seconds_since(t0);
  const int n = static_cast<int>(std::size(kSeeds));
  return {2 * votes > n && s <= kPreferenceMaxSeconds, fmt("%d/%d seeds, %.0f s;", votes, n, s) + detail};
}

// Ordering across decreasing VoIP weight: non-decreasing step to step and
// strictly increasing end to end. Seed means are compared.
bool rises(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) return false;
  }
  return v.back() > v.front();
}

Outcome preference_monotonicity(const Context& ctx) {
  const auto smoke = ctx.profile("smoke");
  std::vector<double> median, delayed;
  std::string detail;
  for (double w : kMonotonicityWeights) {
    double m = 0.0, d = 0.0;
    for (auto seed : kSeeds) {
      const auto r = train_and_eval(ctx, smoke, {10.0, w}, seed,
                                    fmt("c5/w%g_s%llu", w, static_cast<unsigned long long>(seed)));
      m += r.median_bps / static_cast<double>(std::size(kSeeds));
      d += r.delayed / static_cast<double>(std::size(kSeeds));
    }
    median.push_back(m);
    delayed.push_back(d);
    detail += fmt(" [w=[10,%g]: median %.4f Mbit/s, delayed %.4f]", w, m / 1e6, d);
  }
  const bool tpt = rises(median), qos = rises(delayed);
  return {tpt && qos, fmt("throughput %s, delayed fraction %s;", tpt ? "rises" : "does not rise",
                          qos ? "rises" : "does not rise") + detail};
}

replay::SortSequence unit_sequence() {
  replay::SortSequence s;
  s.inputs = Eigen::MatrixXd::Zero(mdp::kFeatureDim, 1);
  s.actions = {0};
  return s;
}

Outcome replay_prioritization(const Context&) {
  const std::vector<double> priorities{0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0};
  replay::ReplayConfig cfg;
  cfg.capacity = 64;
  cfg.warmup = priorities.size();
  cfg.alpha = kReplayAlpha;
  replay::ReplayBuffer buffer(cfg);
  std::map<std::size_t, std::size_t> index_of_slot;
  for (std::size_t i = 0; i < priorities.size(); ++i) {
    const auto h = buffer.push(unit_sequence());
    buffer.update_priority(h, priorities[i]);
    index_of_slot[h.slot] = i;
  }
  Rng rng(6);
  std::vector<std::int64_t> counts(priorities.size(), 0);
  for (int drawn = 0; drawn < kReplayDraws; drawn += 1000) {
    for (const auto& h : buffer.sample(1000, 1.0, rng).handles) ++counts[index_of_slot.at(h.slot)];
  }
  double z = 0.0;
  for (double p : priorities) z += std::pow(p + cfg.priority_epsilon, kReplayAlpha);
  double worst = 0.0;
  for (std::size_t i = 0; i < priorities.size(); ++i) {
    const double expected = std::pow(priorities[i] + cfg.priority_epsilon, kReplayAlpha) / z;
    const double observed = static_cast<double>(counts[i]) / kReplayDraws;
    worst = std::max(worst, std::abs(observed - expected) / expected);
  }

  cfg.alpha = 0.0;
  replay::ReplayBuffer flat(cfg);
  index_of_slot.clear();
  for (std::size_t i = 0; i < priorities.size(); ++i) {
    const auto h = flat.push(unit_sequence());
    flat.update_priority(h, priorities[i]);
    index_of_slot[h.slot] = i;
  }
  std::vector<std::int64_t> flat_counts(priorities.size(), 0);
  for (int drawn = 0; drawn < kReplayDraws; drawn += 1000) {
    for (const auto& h : flat.sample(1000, 1.0, rng).handles) ++flat_counts[index_of_slot.at(h.slot)];
  }
  const double p = testing::chi_square_uniform_p(flat_counts);
  return {worst < kReplayRelTol && p > kChiSquareMinP,
          fmt("alpha %.1f: worst rel deviation %.4f over %d draws; alpha 0: chi-square p = %.3f", kReplayAlpha, worst,
              kReplayDraws, p)};
}

sim::DataFlow fuzz_flow(sim::FlowId id, Rng& rng) {
  sim::DataFlow f;
  f.flow_id = id;
  f.direction = rng.bernoulli(0.5) ? sim::Direction::kUplink : sim::Direction::kDownlink;
  if (rng.bernoulli(0.15)) return f;  // full buffer
  f.group = sim::TrafficGroup::kVoip;
  f.qos = sim::QosRequirement::max_delay(0.1);
  const auto packets = rng.index(4);  // 0: empty buffer
  for (std::size_t k = 0; k < packets; ++k) {
    const auto bits = 1 + static_cast<std::int64_t>(rng.index(8000));
    f.buffer.push_back({bits, 1 + static_cast<std::int64_t>(rng.index(static_cast<std::size_t>(bits))), 0, {}});
  }
  return f;
}

Outcome allocator_fuzz(const Context&) {
  Rng rng(7);
  int deletions = 0;
  for (int trial = 0; trial < kFuzzLists; ++trial) {
    sim::ResourceGridConfig g;
    g.pdcch_capacity = 1 + static_cast<int>(rng.index(12));
    g.prbs_per_direction = 1 + static_cast<int>(rng.index(40));
    g.bits_per_prb = 1 + static_cast<std::int64_t>(rng.index(1000));
    std::vector<sim::DataFlow> flows;
    const auto n = rng.index(30);
    for (std::size_t i = 0; i < n; ++i) flows.push_back(fuzz_flow(static_cast<sim::FlowId>(i), rng));
    std::vector<const sim::DataFlow*> list;
    for (const auto& f : flows) list.push_back(&f);
    std::shuffle(list.begin(), list.end(), rng.engine());
    const auto a = sim::fd_schedule(list, g);
    if (const auto v = sim::allocation_violation(a, g, list)) return {false, fmt("list %d: %s", trial, v->c_str())};

    // Independent replay of the greedy allocation.
    std::map<sim::Direction, std::int64_t> left{{sim::Direction::kUplink, g.prbs_per_direction},
                                                 {sim::Direction::kDownlink, g.prbs_per_direction}};
    std::vector<sim::FlowId> granted, deleted;
    std::vector<int> prbs;
    for (std::size_t i = 0; i < std::min<std::size_t>(list.size(), static_cast<std::size_t>(g.pdcch_capacity)); ++i) {
      const auto& f = *list[i];
      std::int64_t want = left[f.direction];
      if (!f.is_full_buffer()) {
        std::int64_t bits = 0;
        for (const auto& p : f.buffer) bits += p.remaining_bits;
        want = std::min(want, (bits + g.bits_per_prb - 1) / g.bits_per_prb);
      }
      if (want == 0) {
        deleted.push_back(f.flow_id);
        continue;
      }
      left[f.direction] -= want;
      granted.push_back(f.flow_id);
      prbs.push_back(static_cast<int>(want));
    }
    if (a.control_grants != granted || a.deleted_control != deleted) {
      return {false, fmt("list %d: control grants differ from the reference allocation", trial)};
    }
    for (std::size_t i = 0; i < granted.size(); ++i) {
      if (a.data_grants[i].flow_id != granted[i] || a.data_grants[i].prbs != prbs[i]) {
        return {false, fmt("list %d: data grant %zu differs from the reference allocation", trial, i)};
      }
    }
    for (auto id : a.deleted_control) {
      if (a.grant_for(id) != nullptr) return {false, fmt("list %d: deleted control kept a data grant", trial)};
    }
    deletions += static_cast<int>(deleted.size());
  }
  return {true, fmt("%d lists, %d control deletions, all invariants hold", kFuzzLists, deletions)};
}

bool within_ulps(double a, double b, double ulps) {
  return std::abs(a - b) <= ulps * std::numeric_limits<double>::epsilon() * std::abs(b);
}

Outcome exploration(const Context&) {
  int checked = 0;
  for (double a : {1.0, 0.7, 0.4}) {
    for (std::uint64_t p = 0; p < 32; ++p) {
      long double expected = 1.0L;
      for (std::uint64_t k = 0; k < 1 + p % 8; ++k) expected *= a;
      if (!within_ulps(agent::epsilon_schedule(p, a), static_cast<double>(expected), kEpsilonUlps)) {
        return {false, fmt("a = %.1f, p = %llu: %.17g", a, static_cast<unsigned long long>(p),
                           agent::epsilon_schedule(p, a))};
      }
      ++checked;
    }
    // Same table through the per-actor state, after a warm-up spent at ε = 1.
    const agent::ExplorationBase base{a, a, 1};
    agent::ActorExploration actor;
    for (int i = 0; i < 50; ++i) {
      actor.sync(false, base, 0);
      if (actor.epsilon != 1.0) return {false, "epsilon below 1 during warm-up"};
    }
    for (std::uint64_t p = 0; p < 32; ++p) {
      actor.sync(true, base, static_cast<std::int64_t>(p));
      if (actor.epsilon != agent::epsilon_schedule(p, a)) return {false, "actor schedule skips periods"};
    }
  }
  return {true, fmt("%d table entries within %.0f ulp; warm-up holds epsilon at 1", checked, kEpsilonUlps)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const Context& ctx) {
  const auto smoke = ctx.profile("smoke");
  if (!smoke.training.deterministic) return {false, "smoke profile is not single-threaded"};
  const auto a = harness::run_training(smoke, ctx.work_dir / "c9/a");
  const auto b = harness::run_training(smoke, ctx.work_dir / "c9/b");
  const auto la = slurp(a.log_path), lb = slurp(b.log_path);
  const auto lines = std::count(la.begin(), la.end(), '\n');
  const bool logs = la == lb && lines > 1;
  const bool ckpt = slurp(a.checkpoint_path) == slurp(b.checkpoint_path);
  return {logs && ckpt, fmt("training logs %s (%lld lines, %zu bytes), checkpoints %s", logs ? "identical" : "differ",
                            static_cast<long long>(lines), la.size(), ckpt ? "identical" : "differ")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(const Context&)> run;
};

}  // namespace
}  // namespace qadra::acceptance

int main(int argc, char** argv) {
  using namespace qadra::acceptance;
  CLI::App app{"qadra-sched acceptance runner"};
  std::vector<int> selected;
  std::string work_dir = "acceptance_work";
  std::string config_dir = QADRA_CONFIG_DIR;
  std::string report;
  app.add_option("-c,--criterion", selected, "criteria to run (default: all)")->check(CLI::Range(1, 9));
  app.add_option("--work-dir", work_dir, "directory for training runs");
  app.add_option("--config-dir", config_dir, "directory holding smoke.ini and toy_sort.ini");
  app.add_option("--report", report, "append result lines to this file");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "gradient correctness", gradients},
      {2, "toy-sort convergence", toy_sort},
      {3, "starvation curve", starvation},
      {4, "preference extremes", preference_extremes},
      {5, "preference monotonicity", preference_monotonicity},
      {6, "replay prioritization", replay_prioritization},
      {7, "allocator fuzz", allocator_fuzz},
      {8, "exploration schedule", exploration},
      {9, "determinism", determinism},
  };
  if (selected.empty()) {
    for (const auto& c : all) selected.push_back(c.id);
  }
  const Context ctx{fs::absolute(work_dir), config_dir};
  fs::create_directories(ctx.work_dir);

  int failures = 0;
  for (int id : selected) {
    const auto& c = all[static_cast<std::size_t>(id - 1)];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const auto line = fmt("criterion %d %-24s %s (%.1f s) ", c.id, c.name, o.pass ? "PASS" : "FAIL", seconds_since(t0)) +
                      o.detail;
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    if (!report.empty()) std::ofstream(report, std::ios::app) << line << '\n';
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
