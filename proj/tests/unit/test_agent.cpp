// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qadra/agent/actor.hpp"
#include "qadra/agent/environment.hpp"
#include "qadra/agent/exploration.hpp"
#include "qadra/agent/learner.hpp"
#include "qadra/agent/qadra_policy.hpp"
#include "qadra/mdp/sort_episode.hpp"
#include "qadra/nn/qnet.hpp"
#include "qadra/sim/fd_scheduler.hpp"

namespace qadra::agent {
namespace {

using qadra::testing::random_features;
using qadra::testing::random_params;
using qadra::testing::tiny_arch;

TEST(Epsilon, ScheduleExamples) {
  EXPECT_DOUBLE_EQ(epsilon_schedule(5, 1.0), 1.0);
  EXPECT_NEAR(epsilon_schedule(3, 0.4), 0.0256, 1e-15);
  EXPECT_NEAR(epsilon_schedule(7, 0.4), std::pow(0.4, 8), 1e-18);
  EXPECT_DOUBLE_EQ(epsilon_schedule(8, 0.4), 0.4);
  EXPECT_THROW(epsilon_schedule(0, 0.0), std::invalid_argument);
  EXPECT_THROW(epsilon_schedule(0, 1.5), std::invalid_argument);
}

TEST(Epsilon, BaseDecaysToFloor) {
  const ExplorationBase b{1.0, 0.4, 1000};
  EXPECT_DOUBLE_EQ(b.at(0), 1.0);
  EXPECT_NEAR(b.at(500), std::sqrt(0.4), 1e-15);
  EXPECT_DOUBLE_EQ(b.at(1000), 0.4);
  EXPECT_DOUBLE_EQ(b.at(100000), 0.4);
}

TEST(Epsilon, ActorCounterStartsWithLearning) {
  const ExplorationBase b{0.4, 0.4, 10};
  ActorExploration e;
  for (int i = 0; i < 5; ++i) {
    e.sync(false, b, 0);
    EXPECT_EQ(e.epsilon, 1.0);
  }
  EXPECT_EQ(e.syncs, 0u);
  e.sync(true, b, 0);
  EXPECT_NEAR(e.epsilon, 0.4, 1e-16);
  e.sync(true, b, 10);
  EXPECT_NEAR(e.epsilon, 0.16, 1e-16);
  for (int i = 0; i < 6; ++i) e.sync(true, b, 20);
  e.sync(true, b, 30);  // p = 8 wraps
  EXPECT_NEAR(e.epsilon, 0.4, 1e-16);
}

TEST(ActorSort, FullExplorationIsUniformOverPermutations) {
  Rng rng(1);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Zero(6, 3);
  std::map<std::vector<int>, std::int64_t> hist;
  for (int i = 0; i < 60000; ++i) hist[actor_sort(nullptr, x, 1.0, rng).order]++;
  ASSERT_EQ(hist.size(), 6u);
  std::vector<std::int64_t> counts;
  for (const auto& [perm, c] : hist) {
    EXPECT_NEAR(static_cast<double>(c) / 60000.0, 1.0 / 6.0, 0.01);
    counts.push_back(c);
  }
  EXPECT_GT(qadra::testing::chi_square_uniform_p(counts), 0.01);
}

TEST(ActorSort, ZeroNetworkGreedyGivesIdentity) {
  const nn::ParamSet p(tiny_arch());
  Rng rng(2);
  const auto d = actor_sort(&p, random_features(6, 5, rng), 0.0, rng);
  EXPECT_EQ(d.order, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_EQ(d.actions, (std::vector<int>{0, 0, 0, 0, 0}));
}

TEST(ActorSort, SingleElementIsForcedWithoutRandomness) {
  Rng rng(3), untouched(3);
  for (double eps : {0.0, 0.5, 1.0}) {
    const auto d = actor_sort(nullptr, Eigen::MatrixXd::Ones(6, 1), eps, rng);
    EXPECT_EQ(d.order, std::vector<int>{0});
  }
  EXPECT_EQ(rng.next(), untouched.next());
}

TEST(ActorSort, GreedyIsDeterministicAndTracesReplay) {
  Rng rng(4);
  const auto p = random_params(tiny_arch(), rng);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_features(6, 1 + static_cast<int>(rng.index(8)), rng);
    Rng a(9), b(10);
    const auto d1 = actor_sort(&p, x, 0.0, a);
    const auto d2 = actor_sort(&p, x, 0.0, b);
    EXPECT_EQ(d1.order, d2.order);
    EXPECT_EQ(mdp::order_from_actions(static_cast<std::size_t>(x.cols()), d1.actions), d1.order);
  }
}

// The actor's first greedy choice is argmax_j Q([s_in, 0], x_j).
TEST(ActorSort, FirstGreedyChoiceMatchesQOracle) {
  Rng rng(5);
  const auto p = random_params(tiny_arch(), rng);
  const auto& L = p.layout();
  for (int trial = 0; trial < 30; ++trial) {
    const auto x = random_features(6, 5, rng);
    const auto s_in = qadra::testing::naive_encode(L.input_encoder, p.values(), x);
    int best = 0;
    double best_q = -1e300;
    for (int j = 0; j < 5; ++j) {
      std::vector<double> in(s_in);
      in.insert(in.end(), 4, 0.0);
      in.insert(in.end(), x.col(j).data(), x.col(j).data() + 6);
      const double q = qadra::testing::naive_q(L.qnet, p.values(), in);
      if (q > best_q) best_q = q, best = j;
    }
    EXPECT_EQ(actor_sort(&p, x, 0.0, rng).order[0], best);
  }
}

TEST(Actor, ContinuingEnvironmentAttachesNextList) {
  SchedulerEnvConfig c;
  c.traffic.n_voip_users = 1;
  c.grid.bler = 0.0;
  c.preference = {1.0, 0.0};
  Actor actor(std::make_unique<SchedulerEnvironment>(c, 1), 2);
  EXPECT_FALSE(actor.step(nullptr, nullptr, 1.0).has_value());
  for (int t = 2; t <= 40; ++t) {  // step t completes the sort of TTI t − 1
    const auto seq = actor.step(nullptr, nullptr, 1.0);
    ASSERT_TRUE(seq.has_value());
    EXPECT_NO_THROW(seq->validate());
    EXPECT_EQ(seq->inputs.cols(), 1);
    EXPECT_NEAR(seq->reward, 16128.0 / 200000.0, 1e-15);
    // The list observed at TTI 40 holds the full buffer and both VoIP flows.
    EXPECT_EQ(seq->next_inputs.cols(), t == 40 ? 3 : 1);
  }
}

TEST(Actor, EpisodicEnvironmentStoresNoNextList) {
  Actor actor(std::make_unique<ToySortEnvironment>(4, 100, 1), 2);
  for (int i = 0; i < 20; ++i) {
    const auto seq = actor.step(nullptr, nullptr, 1.0);
    ASSERT_TRUE(seq.has_value());
    EXPECT_EQ(seq->next_inputs.cols(), 0);
    std::vector<double> sorted_values;
    for (int j : mdp::order_from_actions(4, seq->actions)) sorted_values.push_back(seq->inputs(0, j));
    EXPECT_EQ(seq->reward, -inversion_count(sorted_values));
  }
}

// Brute-force inversion oracle.
TEST(ToySort, InversionCount) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng.index(9));
    for (auto& x : v) x = static_cast<double>(rng.index(20));
    int expected = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) expected += v[i] > v[j];
    EXPECT_EQ(inversion_count(v), expected);
  }
  const std::vector<double> rev{4, 3, 2, 1};
  EXPECT_EQ(inversion_count(rev), 6);
  EXPECT_THROW(ToySortEnvironment(5, 3, 1), std::invalid_argument);
}

// Linear Q-networks that read only the candidate features: online Q = x₀,
// target Q = x₁ + 0.5.
struct HandNets {
  nn::ParamSet online{arch()};
  nn::ParamSet target{arch()};
  static nn::NetworkArch arch() {
    auto a = tiny_arch();
    a.q_hidden = {};
    return a;
  }
  HandNets() {
    const auto& q = online.layout().qnet.layers[0];
    const std::size_t x0 = q.weight + static_cast<std::size_t>(2 * online.arch().state_dim());
    online.values()[x0] = 1.0;
    target.values()[x0 + 1] = 1.0;
    target.values()[q.bias] = 0.5;
  }
};

TEST(DqnTarget, HandComputedThreeActions) {
  const HandNets n;
  Eigen::MatrixXd cand = Eigen::MatrixXd::Zero(6, 3);
  cand(0, 0) = 3, cand(1, 0) = 0;
  cand(0, 1) = 1, cand(1, 1) = 2;
  cand(0, 2) = 0, cand(1, 2) = 5;
  const Eigen::VectorXd s = Eigen::VectorXd::Zero(4);
  EXPECT_DOUBLE_EQ(dqn_target(n.online, n.target, s, s, cand, TargetMode::kVanilla), 5.5);
  EXPECT_DOUBLE_EQ(dqn_target(n.online, n.target, s, s, cand, TargetMode::kDouble), 0.5);
  EXPECT_DOUBLE_EQ(dqn_target(n.online, n.target, s, s, cand.leftCols(1), TargetMode::kVanilla), 0.5);
  EXPECT_DOUBLE_EQ(dqn_target(n.online, n.target, s, s, cand.rightCols(1), TargetMode::kDouble), 5.5);
  EXPECT_DOUBLE_EQ(dqn_target(n.online, n.target, s, s, Eigen::MatrixXd(6, 0), TargetMode::kDouble), 0.0);
}

TEST(DqnTarget, IdenticalNetworksAgree) {
  Rng rng(7);
  const auto p = random_params(tiny_arch(), rng);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cand = random_features(6, 4, rng);
    const Eigen::VectorXd s1 = Eigen::VectorXd::Random(4), s2 = Eigen::VectorXd::Random(4);
    EXPECT_DOUBLE_EQ(dqn_target(p, p, s1, s2, cand, TargetMode::kVanilla),
                     dqn_target(p, p, s1, s2, cand, TargetMode::kDouble));
  }
}

TEST(SequenceLoss, UndiscountedTerminalTargetIsReward) {
  Rng rng(8);
  const nn::ParamSet zero(tiny_arch());
  const auto p = random_params(tiny_arch(), rng);
  auto seq = qadra::testing::random_sequence(6, 4, 3, rng);
  seq.reward = 2.5;
  const auto r = sequence_loss(zero, p, seq, 0.0, TargetMode::kVanilla, 1.0, {});
  EXPECT_EQ(r.td, (std::vector<double>{0.0, 0.0, 0.0, 2.5}));
  EXPECT_DOUBLE_EQ(r.loss, 0.5 * 2.5 * 2.5 / 4.0);
  EXPECT_DOUBLE_EQ(r.mean_abs_td(), 2.5 / 4.0);
}

// Hand nets give Q(x) = x₀ online and x₁ + 0.5 target, independent of state.
TEST(SequenceLoss, TargetsFollowDiscountMode) {
  const HandNets n;
  replay::SortSequence seq;
  seq.inputs = Eigen::MatrixXd::Zero(6, 2);
  seq.inputs(0, 0) = 1.0, seq.inputs(1, 0) = 4.0;
  seq.inputs(0, 1) = 2.0, seq.inputs(1, 1) = 1.0;
  seq.actions = {1, 0};
  seq.reward = 1.0;
  seq.next_inputs = Eigen::MatrixXd::Zero(6, 1);
  seq.next_inputs(1, 0) = 3.0;
  // Step 0 picks column 1 (Q = 2); what remains is column 0 (Q⁻ = 4.5).
  // Step 1 picks column 0 (Q = 1); next list bootstraps to Q⁻ = 3.5.
  const double g = 0.5;
  const auto per_step = sequence_loss(n.online, n.target, seq, g, TargetMode::kDouble, 1.0, {});
  EXPECT_DOUBLE_EQ(per_step.td[0], g * 4.5 - 2.0);
  EXPECT_DOUBLE_EQ(per_step.td[1], 1.0 + g * 3.5 - 1.0);
  const auto per_tti = sequence_loss(n.online, n.target, seq, g, TargetMode::kDouble, 1.0, {},
                                     DiscountMode::kPerTti);
  EXPECT_DOUBLE_EQ(per_tti.td[0], 4.5 - 2.0);
  EXPECT_DOUBLE_EQ(per_tti.td[1], per_step.td[1]);
}

TEST(SequenceLoss, RejectsBadTraces) {
  const nn::ParamSet p(tiny_arch());
  Rng rng(9);
  auto seq = qadra::testing::random_sequence(6, 3, 1, rng);
  seq.actions[2] = 1;
  EXPECT_THROW(sequence_loss(p, p, seq, 0.9, TargetMode::kDouble, 1.0, {}), std::out_of_range);
}

mdp::FeatureStats identity_stats() {
  return mdp::FeatureStats::from_moments({0, 0, 0, 0, 0, 0}, {1, 1, 1, 1, 1, 1});
}

TEST(Learner, TargetOnlyChangesAtRefixEvents) {
  Rng rng(10);
  LearnerConfig c;
  c.batch_size = 4;
  c.target_period = 3;
  c.adam.learning_rate = 1e-2;
  nn::ParamSet init(tiny_arch());
  init.glorot_init(rng);
  Learner learner(c, init, identity_stats());
  replay::ReplayConfig rc;
  rc.capacity = 64;
  rc.warmup = 8;
  replay::ReplayBuffer buffer(rc);
  for (int i = 0; i < 16; ++i) buffer.push(qadra::testing::random_sequence(6, 3, 2, rng));
  const Eigen::VectorXd s = Eigen::VectorXd::Zero(4);
  const auto cand = random_features(6, 3, rng);
  const double before = dqn_target(learner.online(), learner.target(), s, s, cand, TargetMode::kVanilla);
  const nn::ParamSet frozen = learner.target();
  for (int step = 1; step <= 7; ++step) {
    learner.step(buffer, rng);
    EXPECT_FALSE(learner.online().same_values(init));
    if (step % 3 == 0) {
      EXPECT_TRUE(learner.target().values().size() == learner.online().values().size());
      EXPECT_TRUE(std::equal(learner.target().values().begin(), learner.target().values().end(),
                             learner.online().values().begin()));
    } else if (step < 3) {
      EXPECT_TRUE(learner.target().same_values(frozen));
      EXPECT_DOUBLE_EQ(dqn_target(learner.online(), learner.target(), s, s, cand, TargetMode::kVanilla), before);
    }
  }
  EXPECT_EQ(learner.steps(), 7);
  EXPECT_EQ(learner.online().version(), init.version() + 7);
}

TEST(Learner, NotReadyBufferThrows) {
  Learner learner({}, nn::ParamSet(tiny_arch()), identity_stats());
  replay::ReplayBuffer buffer({});
  Rng rng(1);
  EXPECT_THROW(learner.step(buffer, rng), std::logic_error);
}

TEST(Learner, BetaAnneals) {
  LearnerConfig c;
  c.beta_steps = 100;
  EXPECT_DOUBLE_EQ(c.beta_at(0), 0.4);
  EXPECT_NEAR(c.beta_at(50), 0.7, 1e-15);
  EXPECT_DOUBLE_EQ(c.beta_at(1000), 1.0);
}

TEST(QadraPolicy, GreedySortIsPermutationAndDeterministic) {
  Rng rng(11);
  auto params = std::make_shared<nn::ParamSet>(random_params(tiny_arch(), rng));
  QadraPolicy a(params, identity_stats(), 1e5), b(params, identity_stats(), 1e5);
  sim::Simulator simulator({5, true, 320, 40}, {}, 1);
  for (int t = 0; t < 200; ++t) {
    const auto flows = simulator.advance_tti();
    const auto oa = a.sort(flows, simulator.now());
    ASSERT_EQ(oa, b.sort(flows, simulator.now()));
    ASSERT_TRUE(std::is_permutation(oa.begin(), oa.end(), flows.begin(), flows.end()));
    simulator.transmit(sim::fd_schedule(oa, simulator.grid()));
  }
  EXPECT_EQ(a.name(), "qadra");
}

}  // namespace
}  // namespace qadra::agent
