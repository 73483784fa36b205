// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/replay/sum_tree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qadra::replay {

SumTree::SumTree(std::size_t capacity)
    : capacity_(capacity), leaves_(std::bit_ceil(capacity == 0 ? std::size_t{1} : capacity)),
      nodes_(2 * leaves_, 0.0) {
  if (capacity == 0) throw std::invalid_argument("sum tree capacity must be > 0");
}

void SumTree::set(std::size_t index, double weight) {
  if (index >= capacity_) throw std::out_of_range("sum tree index out of range");
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw std::invalid_argument("sum tree weight must be finite and >= 0");
  std::size_t i = leaves_ + index;
  nodes_[i] = weight;
  // Recompute parents from children rather than applying deltas so that
  // rounding error does not accumulate over millions of updates.
  for (i /= 2; i >= 1; i /= 2) nodes_[i] = nodes_[2 * i] + nodes_[2 * i + 1];
}

std::size_t SumTree::find(double mass) const {
  if (!(total() > 0.0)) throw std::logic_error("sum tree is empty");
  std::size_t i = 1;
  while (i < leaves_) {
    const double left = nodes_[2 * i];
    if (mass < left || nodes_[2 * i + 1] <= 0.0) {
      i = 2 * i;
    } else {
      mass -= left;
      i = 2 * i + 1;
    }
  }
  return i - leaves_;
}

MaxTree::MaxTree(std::size_t capacity)
    : capacity_(capacity), leaves_(std::bit_ceil(capacity == 0 ? std::size_t{1} : capacity)),
      nodes_(2 * leaves_, 0.0) {
  if (capacity == 0) throw std::invalid_argument("max tree capacity must be > 0");
}

void MaxTree::set(std::size_t index, double value) {
  if (index >= capacity_) throw std::out_of_range("max tree index out of range");
  std::size_t i = leaves_ + index;
  nodes_[i] = value;
  for (i /= 2; i >= 1; i /= 2) nodes_[i] = std::max(nodes_[2 * i], nodes_[2 * i + 1]);
}

}  // namespace qadra::replay
