// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>

#include "qadra/sim/types.hpp"

namespace qadra::sim {

/// Frequency-domain scheduler. Control grants go to the first
/// min(|list|, pdcch_capacity) flows; data PRBs are then handed out in the
/// same order until each direction's pool is exhausted. A control-granted
/// flow that ends up with zero PRBs loses its control grant.
TtiAllocation fd_schedule(std::span<const DataFlow* const> priority_list,
                          const ResourceGridConfig& grid);

/// PRBs a flow would consume with `available` PRBs left in its direction.
int requested_prbs(const DataFlow& flow, int available, const ResourceGridConfig& grid);

/// Returns a description of the first violated allocation invariant, or
/// nothing when the allocation is consistent with the grid and the list.
std::optional<std::string> allocation_violation(const TtiAllocation& alloc,
                                                const ResourceGridConfig& grid,
                                                std::span<const DataFlow* const> priority_list);

}  // namespace qadra::sim
