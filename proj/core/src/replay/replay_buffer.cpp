// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/replay/replay_buffer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qadra::replay {

void SortSequence::validate() const {
  const auto n = inputs.cols();
  if (n == 0) throw std::invalid_argument("sequence has an empty input list");
  if (static_cast<Eigen::Index>(actions.size()) != n) throw std::invalid_argument("sequence action count differs from list length");
  for (std::size_t k = 0; k < actions.size(); ++k) {
    if (actions[k] < 0 || actions[k] >= n - static_cast<Eigen::Index>(k)) {
      throw std::invalid_argument("sequence action out of range");
    }
  }
  if (next_inputs.cols() > 0 && next_inputs.rows() != inputs.rows()) {
    throw std::invalid_argument("next list has a different feature dimension");
  }
  if (!std::isfinite(reward) || !inputs.allFinite() || !next_inputs.allFinite()) {
    throw std::invalid_argument("sequence holds non-finite values");
  }
}

void ReplayConfig::validate() const {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be > 0");
  if (warmup > capacity) throw std::invalid_argument("replay warmup exceeds capacity");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  if (!(priority_epsilon > 0.0)) throw std::invalid_argument("priority epsilon must be > 0");
}

ReplayBuffer::ReplayBuffer(ReplayConfig config)
    : config_((config.validate(), config)),
      tree_(config.capacity),
      max_tree_(config.capacity),
      slots_(config.capacity),
      serials_(config.capacity, 0),
      priorities_(config.capacity, 0.0) {}

double ReplayBuffer::max_priority_locked() const {
  const double m = max_tree_.max();
  return m > 0.0 ? m : 1.0;
}

double ReplayBuffer::leaf_weight(double priority) const {
  return config_.uniform ? 1.0 : std::pow(priority, config_.alpha);
}

Handle ReplayBuffer::push(SortSequence seq) {
  seq.validate();
  auto stored = std::make_shared<const SortSequence>(std::move(seq));
  std::lock_guard lock(mutex_);
  const std::size_t slot = pushed_ % config_.capacity;
  if (pushed_ >= config_.capacity) max_tree_.set(slot, 0.0);  // evicted item
  const double p = max_priority_locked();
  slots_[slot] = std::move(stored);
  serials_[slot] = pushed_ + 1;
  priorities_[slot] = p;
  tree_.set(slot, leaf_weight(p));
  max_tree_.set(slot, p);
  ++pushed_;
  return Handle{slot, pushed_};
}

std::size_t ReplayBuffer::size() const {
  std::lock_guard lock(mutex_);
  return std::min<std::size_t>(pushed_, config_.capacity);
}

bool ReplayBuffer::is_ready() const {
  std::lock_guard lock(mutex_);
  return pushed_ > 0 && std::min<std::size_t>(pushed_, config_.capacity) >= config_.warmup;
}

std::uint64_t ReplayBuffer::total_pushed() const {
  std::lock_guard lock(mutex_);
  return pushed_;
}

std::uint64_t ReplayBuffer::stale_updates() const {
  std::lock_guard lock(mutex_);
  return stale_;
}

double ReplayBuffer::max_priority() const {
  std::lock_guard lock(mutex_);
  return max_priority_locked();
}

SampleBatch ReplayBuffer::sample(std::size_t batch, double beta, Rng& rng) const {
  std::lock_guard lock(mutex_);
  const std::size_t n = std::min<std::size_t>(pushed_, config_.capacity);
  if (n == 0 || n < config_.warmup) throw std::logic_error("replay buffer is not ready");
  SampleBatch out;
  out.sequences.reserve(batch);
  out.weights.reserve(batch);
  out.probabilities.reserve(batch);
  out.handles.reserve(batch);
  const double total = tree_.total();
  double max_w = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    const std::size_t slot = tree_.find(rng.uniform() * total);
    const double p = tree_.get(slot) / total;
    const double w = config_.uniform ? 1.0 : std::pow(static_cast<double>(n) * p, -beta);
    out.sequences.push_back(slots_[slot]);
    out.probabilities.push_back(p);
    out.weights.push_back(w);
    out.handles.push_back(Handle{slot, serials_[slot]});
    max_w = std::max(max_w, w);
  }
  for (double& w : out.weights) w /= max_w;
  return out;
}

void ReplayBuffer::update_priority(const Handle& handle, double td_error) {
  if (!std::isfinite(td_error)) throw std::invalid_argument("td error must be finite");
  const double p = std::abs(td_error) + config_.priority_epsilon;
  std::lock_guard lock(mutex_);
  if (handle.slot >= config_.capacity || handle.serial == 0 || serials_[handle.slot] != handle.serial) {
    ++stale_;
    return;
  }
  priorities_[handle.slot] = p;
  tree_.set(handle.slot, leaf_weight(p));
  max_tree_.set(handle.slot, p);
}

std::optional<double> ReplayBuffer::priority(const Handle& handle) const {
  std::lock_guard lock(mutex_);
  if (handle.slot >= config_.capacity || handle.serial == 0 || serials_[handle.slot] != handle.serial) {
    return std::nullopt;
  }
  return priorities_[handle.slot];
}

}  // namespace qadra::replay
