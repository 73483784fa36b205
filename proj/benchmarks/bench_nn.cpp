// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "qadra/agent/actor.hpp"
#include "qadra/agent/learner.hpp"
#include "qadra/common/rng.hpp"
#include "qadra/nn/params.hpp"
#include "qadra/replay/replay_buffer.hpp"

namespace {

using namespace qadra;

nn::NetworkArch arch_for(int size) {
  nn::NetworkArch a;
  if (size == 0) {
    a.encoder.dense = {32};
    a.encoder.gru = {32};
    a.q_hidden = {64, 64};
  }
  return a;  // size 1: default widths
}

Eigen::MatrixXd random_list(int n, Rng& rng) {
  Eigen::MatrixXd x(6, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < 6; ++i) x(i, j) = 2.0 * rng.uniform() - 1.0;
  }
  return x;
}

// Greedy sort of an 11-flow list (5 VoIP users plus full buffer).
void BM_GreedySort(benchmark::State& state) {
  Rng rng(1);
  nn::ParamSet params(arch_for(static_cast<int>(state.range(0))));
  params.glorot_init(rng);
  const auto x = random_list(11, rng);
  for (auto _ : state) benchmark::DoNotOptimize(agent::actor_sort(&params, x, 0.0, rng));
}
BENCHMARK(BM_GreedySort)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

// One prioritized batch of 32 sequences of length 11, forward and BPTT.
void BM_LearnerStep(benchmark::State& state) {
  Rng rng(2);
  const auto arch = arch_for(static_cast<int>(state.range(0)));
  nn::ParamSet params(arch);
  params.glorot_init(rng);
  replay::ReplayConfig rc;
  rc.capacity = 4096;
  rc.warmup = 1024;
  replay::ReplayBuffer buffer(rc);
  for (int i = 0; i < 2048; ++i) {
    replay::SortSequence s;
    s.inputs = random_list(11, rng);
    for (int k = 0; k < 11; ++k) s.actions.push_back(static_cast<int>(rng.index(static_cast<std::size_t>(11 - k))));
    s.reward = rng.uniform();
    s.next_inputs = random_list(11, rng);
    buffer.push(std::move(s));
  }
  mdp::FeatureVector mean{}, sd{};
  sd.fill(1.0);
  agent::LearnerConfig lc;
  agent::Learner learner(lc, params, mdp::FeatureStats::from_moments(mean, sd));
  for (auto _ : state) benchmark::DoNotOptimize(learner.step(buffer, rng));
}
BENCHMARK(BM_LearnerStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
