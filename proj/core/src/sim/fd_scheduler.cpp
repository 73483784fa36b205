// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/sim/fd_scheduler.hpp"

#include <algorithm>
#include <set>

namespace qadra::sim {

int requested_prbs(const DataFlow& flow, int available, const ResourceGridConfig& grid) {
  if (available <= 0) return 0;
  if (flow.is_full_buffer()) return available;
  const std::int64_t bits = flow.buffered_bits();
  const std::int64_t needed = (bits + grid.bits_per_prb - 1) / grid.bits_per_prb;
  return static_cast<int>(std::min<std::int64_t>(needed, available));
}

TtiAllocation fd_schedule(std::span<const DataFlow* const> priority_list,
                          const ResourceGridConfig& grid) {
  TtiAllocation alloc;
  const auto n_control = std::min<std::size_t>(priority_list.size(),
                                                static_cast<std::size_t>(grid.pdcch_capacity));
  int remaining_ul = grid.prbs_per_direction;
  int remaining_dl = grid.prbs_per_direction;

  for (std::size_t i = 0; i < n_control; ++i) {
    const DataFlow& flow = *priority_list[i];
    int& pool = flow.is_uplink() ? remaining_ul : remaining_dl;
    const int prbs = requested_prbs(flow, pool, grid);
    if (prbs == 0) {
      alloc.deleted_control.push_back(flow.flow_id);
      continue;
    }
    pool -= prbs;
    alloc.control_grants.push_back(flow.flow_id);
    alloc.data_grants.push_back({flow.flow_id, flow.direction, prbs});
  }
  return alloc;
}

std::optional<std::string> allocation_violation(const TtiAllocation& alloc,
                                                const ResourceGridConfig& grid,
                                                std::span<const DataFlow* const> priority_list) {
  if (alloc.control_grants.size() > static_cast<std::size_t>(grid.pdcch_capacity)) {
    return "control grants exceed pdcch capacity";
  }
  std::set<FlowId> offered;
  for (const DataFlow* f : priority_list) offered.insert(f->flow_id);
  std::set<FlowId> control(alloc.control_grants.begin(), alloc.control_grants.end());
  if (control.size() != alloc.control_grants.size()) return "duplicate control grant";
  for (FlowId id : control) {
    if (!offered.count(id)) return "control grant for a flow not in the priority list";
  }
  std::set<FlowId> data;
  for (const auto& g : alloc.data_grants) {
    if (g.prbs <= 0) return "non-positive data grant";
    if (!control.count(g.flow_id)) return "data grant without control grant";
    if (!data.insert(g.flow_id).second) return "duplicate data grant";
  }
  if (data.size() != control.size()) return "control grant left without data grant";
  for (Direction d : {Direction::kUplink, Direction::kDownlink}) {
    if (alloc.prbs_used(d) > grid.prbs_per_direction) return "PRB pool overcommitted";
  }
  return std::nullopt;
}

}  // namespace qadra::sim
