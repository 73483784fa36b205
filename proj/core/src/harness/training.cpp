// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/harness/training.hpp"

#include <atomic>
#include <bit>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qadra/agent/actor.hpp"
#include "qadra/agent/exploration.hpp"
#include "qadra/agent/learner.hpp"

namespace qadra::harness {
namespace {

constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kLearnerStream = 2;
constexpr std::uint64_t kEnvStreamBase = 100;
constexpr std::uint64_t kActorStreamBase = 200;

nn::Checkpoint make_checkpoint(const nn::ParamSet& params, const mdp::FeatureStats* stats) {
  nn::Checkpoint c{params, {}, {}};
  if (stats != nullptr) {
    c.feature_mean.assign(stats->mean().begin(), stats->mean().end());
    c.feature_std.assign(stats->stddev().begin(), stats->stddev().end());
  }
  return c;
}

class TrainingLog {
 public:
  explicit TrainingLog(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << "step,loss,mean_abs_td,epsilon,buffer_size,param_version,stale_updates\n";
  }

  std::string write(const agent::LearnerStepStats& s, double epsilon, std::size_t buffer_size,
                    std::uint64_t version, std::uint64_t stale) {
    char line[256];
    std::snprintf(line, sizeof(line), "%lld,%.17g,%.17g,%.17g,%zu,%llu,%llu", static_cast<long long>(s.step),
                  s.loss, s.mean_abs_td, epsilon, buffer_size, static_cast<unsigned long long>(version),
                  static_cast<unsigned long long>(stale));
    out_ << line << '\n';
    return line;
  }

  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

agent::ExplorationBase exploration_base(const TrainingConfig& t) {
  agent::ExplorationBase b{t.exploration_start, t.exploration_end, t.exploration_horizon_ttis};
  b.validate();
  return b;
}

struct Shared {
  const ExperimentConfig& config;
  std::filesystem::path out_dir;
  replay::ReplayBuffer buffer;
  TrainingLog log;
  std::function<void(const std::string&)> progress;
  std::int64_t learner_steps = 0;

  void after_step(const agent::Learner& learner, const agent::LearnerStepStats& s, double epsilon) {
    const auto line = log.write(s, epsilon, buffer.size(), learner.online().version(), buffer.stale_updates());
    if (progress) progress(line);
    const auto every = config.training.checkpoint_every;
    if (every > 0 && s.step % every == 0) {
      nn::save_checkpoint(out_dir / ("checkpoint_step_" + std::to_string(s.step) + ".qckp"),
                          make_checkpoint(learner.online(), &learner.stats()));
    }
  }

  bool learner_done() const {
    const auto cap = config.training.max_learner_steps;
    return cap > 0 && learner_steps >= cap;
  }
};

void train_deterministic(Shared& sh, nn::ParamSet init, std::vector<agent::Actor>& actors,
                         std::optional<agent::Learner>& learner, std::int64_t& actor_ttis) {
  const auto& t = sh.config.training;
  const auto base = exploration_base(t);
  Rng learner_rng(derive_seed(sh.config.run.seed, kLearnerStream));
  std::vector<agent::ActorExploration> sched(actors.size());
  std::vector<std::shared_ptr<const nn::ParamSet>> snaps(actors.size());
  std::shared_ptr<const nn::ParamSet> latest;
  std::int64_t learn_start = 0;
  const auto agg_ratio = t.actor_ttis_per_learner_step;

  for (std::int64_t tti = 1; tti <= t.total_ttis && !sh.learner_done(); ++tti) {
    for (std::size_t i = 0; i < actors.size() && !sh.learner_done(); ++i) {
      if ((tti - 1) % t.sync_period_ttis == 0) {
        if (learner) {
          if (!latest || latest->version() != learner->online().version()) latest = learner->snapshot();
          snaps[i] = latest;
        }
        sched[i].sync(learner.has_value(), base, tti - learn_start);
      }
      auto seq = actors[i].step(snaps[i].get(), learner ? &learner->stats() : nullptr, sched[i].epsilon);
      if (seq) sh.buffer.push(std::move(*seq));
      ++actor_ttis;
      if (actor_ttis % agg_ratio != 0) continue;
      if (!learner && sh.buffer.is_ready()) {
        learner.emplace(sh.config.learner(), init, stats_from_buffer(sh.buffer));
        learn_start = tti;
      }
      if (learner) {
        const auto s = learner->step(sh.buffer, learner_rng);
        sh.learner_steps = s.step;
        sh.after_step(*learner, s, sched[0].epsilon);
      }
    }
  }
}

void train_threaded(Shared& sh, nn::ParamSet init, std::vector<agent::Actor>& actors,
                    std::optional<agent::Learner>& learner, std::int64_t& actor_ttis) {
  const auto& t = sh.config.training;
  const auto base = exploration_base(t);
  std::mutex pub_mutex;
  std::shared_ptr<const nn::ParamSet> published;
  std::shared_ptr<const mdp::FeatureStats> published_stats;
  std::atomic<std::int64_t> agg{0};
  std::atomic<std::int64_t> learn_start_agg{-1};
  std::atomic<int> running{static_cast<int>(actors.size())};
  std::atomic<bool> stop{false};
  std::atomic<std::uint64_t> eps_bits{0};
  std::vector<std::exception_ptr> errors(actors.size() + 1);

  auto publish_epsilon = [&](double e) { eps_bits.store(std::bit_cast<std::uint64_t>(e)); };
  publish_epsilon(1.0);

  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < actors.size(); ++i) {
    threads.emplace_back([&, i] {
      try {
        agent::ActorExploration sched;
        std::shared_ptr<const nn::ParamSet> snap;
        std::shared_ptr<const mdp::FeatureStats> stats;
        std::int64_t local_start = -1;
        for (std::int64_t tti = 1; tti <= t.total_ttis && !stop.load(); ++tti) {
          if ((tti - 1) % t.sync_period_ttis == 0) {
            {
              std::lock_guard lock(pub_mutex);
              snap = published;
              stats = published_stats;
            }
            if (stats && local_start < 0) local_start = tti;
            sched.sync(stats != nullptr, base, tti - local_start);
            if (i == 0) publish_epsilon(sched.epsilon);
          }
          auto seq = actors[i].step(snap.get(), stats.get(), sched.epsilon);
          if (seq) sh.buffer.push(std::move(*seq));
          agg.fetch_add(1);
        }
      } catch (...) {
        errors[i] = std::current_exception();
        stop.store(true);
      }
      running.fetch_sub(1);
    });
  }

  threads.emplace_back([&] {
    try {
      Rng rng(derive_seed(sh.config.run.seed, kLearnerStream));
      while (!stop.load()) {
        const bool actors_done = running.load() == 0;
        if (!learner) {
          if (sh.buffer.is_ready()) {
            learner.emplace(sh.config.learner(), init, stats_from_buffer(sh.buffer));
            learn_start_agg.store(agg.load());
            std::lock_guard lock(pub_mutex);
            published = learner->snapshot();
            published_stats = std::make_shared<const mdp::FeatureStats>(learner->stats());
          } else if (actors_done) {
            break;
          } else {
            std::this_thread::yield();
          }
          continue;
        }
        // Keep the learner at one step per `ratio` actor TTIs, as in the
        // deterministic mode.
        const std::int64_t due = (agg.load() - learn_start_agg.load()) / t.actor_ttis_per_learner_step + 1;
        if (sh.learner_steps >= due) {
          if (actors_done) break;
          std::this_thread::yield();
          continue;
        }
        const auto s = learner->step(sh.buffer, rng);
        sh.learner_steps = s.step;
        sh.after_step(*learner, s, std::bit_cast<double>(eps_bits.load()));
        {
          std::lock_guard lock(pub_mutex);
          published = learner->snapshot();
        }
        if (sh.learner_done()) stop.store(true);
      }
    } catch (...) {
      errors.back() = std::current_exception();
      stop.store(true);
    }
  });

  for (auto& th : threads) th.join();
  actor_ttis = agg.load();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::unique_ptr<agent::Environment> make_environment(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.scenario.environment == "toy_sort") {
    return std::make_unique<agent::ToySortEnvironment>(config.scenario.toy_list_size,
                                                       config.scenario.toy_max_value, seed);
  }
  return std::make_unique<agent::SchedulerEnvironment>(config.scheduler_env(), seed);
}

mdp::FeatureStats stats_from_buffer(const replay::ReplayBuffer& buffer) {
  mdp::FeatureStats stats;
  buffer.for_each([&](const replay::SortSequence& seq) {
    for (Eigen::Index j = 0; j < seq.inputs.cols(); ++j) {
      mdp::FeatureVector x{};
      for (std::size_t i = 0; i < mdp::kFeatureDim; ++i) x[i] = seq.inputs(static_cast<Eigen::Index>(i), j);
      stats.accumulate(x);
    }
  });
  stats.finalize();
  return stats;
}

TrainingResult run_training(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                            const std::function<void(const std::string&)>& progress) {
  config.validate();
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream cfg(out_dir / "config.ini");
    cfg << serialize_config(config);
  }
  const std::uint64_t seed = config.run.seed;
  nn::ParamSet init(config.arch());
  Rng init_rng(derive_seed(seed, kInitStream));
  init.glorot_init(init_rng);

  Shared sh{config, out_dir, replay::ReplayBuffer(config.replay()), TrainingLog(out_dir / "training_log.csv"),
            progress};
  std::vector<agent::Actor> actors;
  for (int i = 0; i < config.training.actors; ++i) {
    const auto k = static_cast<std::uint64_t>(i);
    actors.emplace_back(make_environment(config, derive_seed(seed, kEnvStreamBase + k)),
                        derive_seed(seed, kActorStreamBase + k));
  }
  std::optional<agent::Learner> learner;
  std::int64_t actor_ttis = 0;
  if (config.training.deterministic) {
    train_deterministic(sh, init, actors, learner, actor_ttis);
  } else {
    train_threaded(sh, init, actors, learner, actor_ttis);
  }
  sh.log.flush();

  TrainingResult result{
      learner ? make_checkpoint(learner->online(), &learner->stats()) : make_checkpoint(init, nullptr),
      sh.learner_steps, actor_ttis, sh.buffer.total_pushed(), out_dir / "checkpoint.qckp",
      out_dir / "training_log.csv"};
  nn::save_checkpoint(result.checkpoint_path, result.checkpoint);
  return result;
}

}  // namespace qadra::harness
