// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace qadra::replay {

/// Fixed-capacity binary sum tree over non-negative leaf weights.
class SumTree {
 public:
  explicit SumTree(std::size_t capacity);

  std::size_t capacity() const { return capacity_; }
  void set(std::size_t index, double weight);
  double get(std::size_t index) const { return nodes_[leaves_ + index]; }
  double total() const { return nodes_[1]; }

  /// Smallest leaf index whose inclusive prefix sum exceeds `mass`. Masses at
  /// or beyond total() map to the last positive leaf.
  std::size_t find(double mass) const;

 private:
  std::size_t capacity_;
  std::size_t leaves_;  // power of two ≥ capacity
  std::vector<double> nodes_;
};

/// Fixed-capacity max segment tree; empty leaves hold 0.
class MaxTree {
 public:
  explicit MaxTree(std::size_t capacity);

  void set(std::size_t index, double value);
  double max() const { return nodes_[1]; }

 private:
  std::size_t capacity_;
  std::size_t leaves_;
  std::vector<double> nodes_;
};

}  // namespace qadra::replay
