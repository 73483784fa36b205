// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/harness/evaluation.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "qadra/agent/actor.hpp"
#include "qadra/agent/environment.hpp"
#include "qadra/agent/qadra_policy.hpp"
#include "qadra/harness/stats.hpp"
#include "qadra/mdp/reward.hpp"
#include "qadra/nn/checkpoint.hpp"
#include "qadra/sim/fd_scheduler.hpp"
#include "qadra/sim/simulator.hpp"

namespace qadra::harness {
namespace {

constexpr std::uint64_t kEvalStream = 7;
constexpr std::uint64_t kToyHeldOutStream = 999;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::unique_ptr<policy::TdPolicy> make_policy(const ExperimentConfig& config,
                                              const std::optional<std::filesystem::path>& checkpoint) {
  if (config.policy.name != "qadra") {
    return policy::make_baseline(config.policy.name, config.resource_grid(),
                                 policy::SortOptions{config.policy.voip_first}, config.policy.pf_ema);
  }
  if (!checkpoint) throw std::invalid_argument("policy qadra needs a checkpoint");
  const auto ckpt = nn::load_checkpoint(*checkpoint);
  if (!(ckpt.params.arch() == config.arch())) {
    throw std::runtime_error("checkpoint architecture " + ckpt.params.arch().describe() +
                             " does not match config " + config.arch().describe());
  }
  return agent::QadraPolicy::from_checkpoint(ckpt, config.saturation_bits);
}

EvalResult run_eval(const ExperimentConfig& config, policy::TdPolicy& policy, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  sim::Simulator sim(config.traffic(), config.resource_grid(), derive_seed(seed, kEvalStream));
  EvalResult result;
  RunSummary& s = result.summary;
  s.policy = policy.name();
  s.ttis = config.eval.ttis;
  for (std::int64_t t = 0; t < config.eval.ttis; ++t) {
    const auto flows = sim.advance_tti();
    const auto sorted = policy.sort(flows, sim.now());
    const auto outcome = sim.transmit(sim::fd_schedule(sorted, sim.grid()));
    policy.on_transmit(outcome);
    const auto r = mdp::compute_reward_vector(outcome);
    s.reward_full_buffer_bits += r.full_buffer_bits;
    s.reward_voip += r.voip;
  }
  sim.finalize();
  result.metrics = sim.metrics();

  const double tti_s = config.grid.tti_duration_s;
  double dl_bits = 0.0;
  for (const auto& rec : result.metrics.ttis) dl_bits += static_cast<double>(rec.dl_bits);
  if (s.ttis > 0) {
    s.mean_dl_throughput_bps = dl_bits / (static_cast<double>(s.ttis) * tti_s);
    const auto windows = windowed_dl_throughput(result.metrics.ttis, config.eval.throughput_window_ttis, tti_s);
    const double qs[] = {0.1, 0.5, 0.9};
    const auto p = percentiles(windows, qs);
    s.dl_throughput_p10_bps = p[0];
    s.dl_throughput_p50_bps = p[1];
    s.dl_throughput_p90_bps = p[2];
  }
  for (const auto& d : result.metrics.delays) {
    if (d.group != sim::TrafficGroup::kVoip) continue;
    ++s.voip_packets;
    if (sim::exceeds_delay_bound(d.delay_s, sim::kVoipMaxDelayS)) ++s.delayed_packets;
  }
  s.delayed_fraction = delayed_fraction(result.metrics.delays, sim::kVoipMaxDelayS);
  s.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::string summary_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["policy"] = s.policy;
  j["ttis"] = s.ttis;
  j["mean_dl_throughput_bps"] = s.mean_dl_throughput_bps;
  j["dl_throughput_percentiles_bps"] = {{"p10", s.dl_throughput_p10_bps},
                                        {"p50", s.dl_throughput_p50_bps},
                                        {"p90", s.dl_throughput_p90_bps}};
  j["voip_packets"] = s.voip_packets;
  j["delayed_packets"] = s.delayed_packets;
  j["delayed_fraction"] = s.delayed_fraction;
  j["reward_totals"] = {{"full_buffer_bits", s.reward_full_buffer_bits}, {"voip", s.reward_voip}};
  j["runtime_s"] = s.runtime_s;
  return j.dump(2);
}

void write_eval_outputs(const std::filesystem::path& dir, const EvalResult& result) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "tti.csv");
    out << "tti,dl_bits,ul_bits,n_scheduled\n";
    for (const auto& r : result.metrics.ttis) {
      out << r.tti << ',' << r.dl_bits << ',' << r.ul_bits << ',' << r.n_scheduled << '\n';
    }
  }
  {
    auto out = open_out(dir / "delays.csv");
    out << "group,created_tti,delivered_tti,delay_s\n";
    for (const auto& d : result.metrics.delays) {
      out << sim::to_string(d.group) << ',' << d.created_tti << ','
          << (d.delivered_tti ? *d.delivered_tti : -1) << ',' << g17(d.delay_s) << '\n';
    }
  }
  auto out = open_out(dir / "summary.json");
  out << summary_json(result.summary) << '\n';
}

std::vector<SweepRow> starvation_sweep(const ExperimentConfig& config, const std::vector<int>& counts,
                                       std::uint64_t seed) {
  if (config.policy.name == "qadra") throw std::invalid_argument("sweep needs a baseline policy");
  std::vector<SweepRow> rows;
  for (int n : counts) {
    if (n < 0) throw std::invalid_argument("VoIP count must be >= 0");
    ExperimentConfig c = config;
    c.scenario.n_voip = n;
    auto policy = make_policy(c, std::nullopt);
    const auto r = run_eval(c, *policy, seed);
    rows.push_back({n, r.summary.mean_dl_throughput_bps, r.summary.delayed_fraction});
  }
  return rows;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  auto out = open_out(path);
  out << "n_voip,mean_dl_throughput_bps,delayed_fraction\n";
  for (const auto& r : rows) out << r.n_voip << ',' << g17(r.mean_dl_throughput_bps) << ',' << g17(r.delayed_fraction) << '\n';
}

ToyEvalResult evaluate_toy(const ExperimentConfig& config, const nn::ParamSet& params,
                           const mdp::FeatureStats& stats, std::uint64_t seed) {
  Rng rng(derive_seed(seed, kToyHeldOutStream));
  Rng unused(0);
  ToyEvalResult r;
  for (int i = 0; i < config.eval.toy_lists; ++i) {
    const auto list = agent::ToySortEnvironment::draw_list(config.scenario.toy_list_size,
                                                          config.scenario.toy_max_value, rng);
    const auto d = agent::actor_sort(&params, agent::normalize_columns(list, stats), 0.0, unused);
    std::vector<double> values;
    for (int j : d.order) values.push_back(list(0, j));
    ++r.lists;
    if (agent::inversion_count(values) == 0) ++r.sorted;
  }
  return r;
}

}  // namespace qadra::harness
