// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "qadra/common/rng.hpp"
#include "qadra/replay/replay_buffer.hpp"
#include "qadra/replay/sum_tree.hpp"

namespace {

using namespace qadra;

void BM_SumTreeUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  replay::SumTree tree(n);
  Rng rng(1);
  std::size_t i = 0;
  for (auto _ : state) {
    tree.set(i, rng.uniform());
    i = (i + 1) % n;
  }
}
BENCHMARK(BM_SumTreeUpdate)->Arg(1 << 10)->Arg(1 << 17);

void BM_SumTreeFind(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  replay::SumTree tree(n);
  Rng rng(2);
  for (std::size_t i = 0; i < n; ++i) tree.set(i, rng.uniform());
  for (auto _ : state) benchmark::DoNotOptimize(tree.find(rng.uniform() * tree.total()));
}
BENCHMARK(BM_SumTreeFind)->Arg(1 << 10)->Arg(1 << 17);

// Batch of 32 with importance weights, then the priority write-back.
void BM_ReplaySampleAndUpdate(benchmark::State& state) {
  replay::ReplayConfig rc;
  rc.capacity = 1 << 17;
  rc.warmup = 1;
  replay::ReplayBuffer buffer(rc);
  Rng rng(3);
  for (std::size_t i = 0; i < rc.capacity; ++i) {
    replay::SortSequence s;
    s.inputs = Eigen::MatrixXd::Zero(6, 1);
    s.actions = {0};
    buffer.update_priority(buffer.push(std::move(s)), rng.uniform());
  }
  for (auto _ : state) {
    const auto batch = buffer.sample(32, 0.4, rng);
    for (const auto& h : batch.handles) buffer.update_priority(h, rng.uniform());
  }
}
BENCHMARK(BM_ReplaySampleAndUpdate)->Unit(benchmark::kMicrosecond);

}  // namespace
