// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qadra/common/rng.hpp"
#include "qadra/replay/sum_tree.hpp"

namespace qadra::replay {

/// One stored sort: raw (unnormalized) features of the input list, the
/// selection-sort action trace, the scalar reward and the next TTI's list.
struct SortSequence {
  Eigen::MatrixXd inputs;       // feature_dim × N
  std::vector<int> actions;     // N entries, actions[k] ∈ [0, N − k)
  double reward = 0.0;
  Eigen::MatrixXd next_inputs;  // feature_dim × M, M may be 0

  int length() const { return static_cast<int>(inputs.cols()); }
  /// Throws std::invalid_argument when the trace is not a valid selection sort.
  void validate() const;
};

struct ReplayConfig {
  std::size_t capacity = 131072;
  std::size_t warmup = 20000;
  double alpha = 0.6;
  double priority_epsilon = 1e-6;
  /// Plain uniform sampling with unit importance weights.
  bool uniform = false;

  void validate() const;
};

struct Handle {
  std::size_t slot = 0;
  std::uint64_t serial = 0;
};

struct SampleBatch {
  std::vector<std::shared_ptr<const SortSequence>> sequences;
  std::vector<double> weights;        // importance weights, max 1
  std::vector<double> probabilities;  // P(i) at sampling time
  std::vector<Handle> handles;
};

/// FIFO ring of sort sequences with proportional prioritized sampling.
/// All public members are safe to call concurrently.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(ReplayConfig config);

  /// Stores `seq` with the largest priority currently held (1.0 in an
  /// empty buffer), evicting the oldest item when full.
  Handle push(SortSequence seq);

  std::size_t size() const;
  std::size_t capacity() const { return config_.capacity; }
  bool is_ready() const;
  std::uint64_t total_pushed() const;
  std::uint64_t stale_updates() const;
  double max_priority() const;

  /// Throws std::logic_error when not ready.
  SampleBatch sample(std::size_t batch, double beta, Rng& rng) const;

  /// priority ← |td_error| + ε_p. Stale handles are ignored and counted.
  void update_priority(const Handle& handle, double td_error);

  /// Raw priority of a live item, nullopt if the handle is stale.
  std::optional<double> priority(const Handle& handle) const;

  /// Visits every stored sequence, oldest first.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::lock_guard lock(mutex_);
    const std::size_t n = std::min<std::size_t>(pushed_, config_.capacity);
    const std::size_t start = pushed_ <= config_.capacity ? 0 : pushed_ % config_.capacity;
    for (std::size_t i = 0; i < n; ++i) fn(*slots_[(start + i) % config_.capacity]);
  }

  const ReplayConfig& config() const { return config_; }

 private:
  double leaf_weight(double priority) const;
  double max_priority_locked() const;

  ReplayConfig config_;
  mutable std::mutex mutex_;
  SumTree tree_;
  MaxTree max_tree_;
  std::vector<std::shared_ptr<const SortSequence>> slots_;
  std::vector<std::uint64_t> serials_;
  std::vector<double> priorities_;
  std::uint64_t pushed_ = 0;
  std::uint64_t stale_ = 0;
};

}  // namespace qadra::replay
