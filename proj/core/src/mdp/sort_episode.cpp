// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/mdp/sort_episode.hpp"

#include <algorithm>

namespace qadra::mdp {

std::vector<int> order_from_actions(std::size_t n, const std::vector<int>& actions) {
  if (actions.size() != n) throw std::out_of_range("trace length differs from list length");
  std::vector<int> remaining(n);
  for (std::size_t i = 0; i < n; ++i) remaining[i] = static_cast<int>(i);
  std::vector<int> order;
  order.reserve(n);
  for (int a : actions) {
    if (a < 0 || static_cast<std::size_t>(a) >= remaining.size()) {
      throw std::out_of_range("sort action outside the current input list");
    }
    order.push_back(remaining[static_cast<std::size_t>(a)]);
    remaining.erase(remaining.begin() + a);
  }
  return order;
}

std::vector<int> actions_from_order(const std::vector<int>& order) {
  std::vector<int> remaining(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) remaining[i] = static_cast<int>(i);
  std::vector<int> actions;
  actions.reserve(order.size());
  for (int idx : order) {
    auto it = std::find(remaining.begin(), remaining.end(), idx);
    if (it == remaining.end()) throw std::invalid_argument("order is not a permutation");
    actions.push_back(static_cast<int>(it - remaining.begin()));
    remaining.erase(it);
  }
  return actions;
}

}  // namespace qadra::mdp
