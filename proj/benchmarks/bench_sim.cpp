// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <vector>

#include <benchmark/benchmark.h>

#include "qadra/common/rng.hpp"
#include "qadra/policy/td_policy.hpp"
#include "qadra/sim/fd_scheduler.hpp"
#include "qadra/sim/simulator.hpp"

namespace {

using namespace qadra;

void BM_FdSchedule(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Rng rng(1);
  std::vector<sim::DataFlow> flows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& f = flows[static_cast<std::size_t>(i)];
    f.flow_id = i;
    f.direction = i % 2 ? sim::Direction::kUplink : sim::Direction::kDownlink;
    if (i == 0) continue;
    f.group = sim::TrafficGroup::kVoip;
    f.buffer.push_back({320, 320, 0, {}});
  }
  std::vector<const sim::DataFlow*> list;
  for (const auto& f : flows) list.push_back(&f);
  std::shuffle(list.begin(), list.end(), rng.engine());
  const sim::ResourceGridConfig grid;
  for (auto _ : state) benchmark::DoNotOptimize(sim::fd_schedule(list, grid));
}
BENCHMARK(BM_FdSchedule)->Arg(5)->Arg(21)->Arg(41);

// One full TTI: traffic, round-robin sort, allocation and transmission.
void BM_RoundRobinTti(benchmark::State& state) {
  const sim::ResourceGridConfig grid;
  sim::Simulator sim({static_cast<int>(state.range(0)), true, 320, 40}, grid, 1);
  auto rr = policy::make_baseline("round_robin", grid);
  for (auto _ : state) {
    const auto flows = sim.advance_tti();
    const auto sorted = rr->sort(flows, sim.now());
    const auto out = sim.transmit(sim::fd_schedule(sorted, grid));
    rr->on_transmit(out);
    benchmark::DoNotOptimize(out.dl_bits);
  }
}
BENCHMARK(BM_RoundRobinTti)->Arg(5)->Arg(20);

}  // namespace
