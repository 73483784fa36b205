// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qadra::mdp {

/// Selection-sort episode over a list of N elements: each step moves the
/// element at a 0-based index of the *current* input list to the end of
/// the output list. Step k (0-based) has N − k valid actions.
template <typename T>
class SortEpisode {
 public:
  explicit SortEpisode(std::vector<T> input) : original_(input), input_(std::move(input)) {
    output_.reserve(original_.size());
  }

  /// Throws std::out_of_range unless action < remaining().size().
  void step(std::size_t action) {
    if (action >= input_.size()) {
      throw std::out_of_range("sort action outside the current input list");
    }
    output_.push_back(std::move(input_[action]));
    input_.erase(input_.begin() + static_cast<std::ptrdiff_t>(action));
    ++k_;
  }

  std::size_t action_space_size() const { return input_.size(); }
  std::size_t steps_taken() const { return k_; }
  bool done() const { return input_.empty(); }
  std::size_t size() const { return original_.size(); }

  const std::vector<T>& original() const { return original_; }
  const std::vector<T>& remaining() const { return input_; }
  const std::vector<T>& output() const { return output_; }

 private:
  std::vector<T> original_;
  std::vector<T> input_;
  std::vector<T> output_;
  std::size_t k_ = 0;
};

/// Converts a selection-sort action trace into a permutation of original
/// indices; throws std::out_of_range on an invalid trace.
std::vector<int> order_from_actions(std::size_t n, const std::vector<int>& actions);

/// Inverse of order_from_actions.
std::vector<int> actions_from_order(const std::vector<int>& order);

}  // namespace qadra::mdp
