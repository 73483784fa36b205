// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "qadra/nn/params.hpp"

namespace qadra::nn {

/// Parameters plus the frozen feature normalization they were trained with.
/// Layout is documented in docs/checkpoint_format.md.
struct Checkpoint {
  ParamSet params;
  std::vector<double> feature_mean;
  std::vector<double> feature_std;
};

inline constexpr char kCheckpointMagic[8] = {'Q', 'A', 'D', 'R', 'A', 'C', 'K', 'P'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
/// Throws std::runtime_error on bad magic, unknown version, truncation or a
/// parameter count that disagrees with the stored architecture.
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace qadra::nn
