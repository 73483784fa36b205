// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qadra/common/rng.hpp"
#include "qadra/nn/arch.hpp"

namespace qadra::nn {

/// Flat parameter or gradient storage. Eigen's vectorized reductions peel
/// by address, so a fixed base alignment keeps results bitwise reproducible.
using FlatVector = std::vector<double, Eigen::aligned_allocator<double>>;

/// Value-semantic container for Γ = {φ, θ, ψ} as one flat array plus a
/// version stamp. Copies own independent storage; only the immutable
/// layout is shared.
class ParamSet {
 public:
  /// All-zero parameters.
  explicit ParamSet(const NetworkArch& arch);

  const NetworkLayout& layout() const { return *layout_; }
  const NetworkArch& arch() const { return layout_->arch; }
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::span<const double> input_encoder() const { return slice(layout_->input_encoder.begin, layout_->input_encoder.end); }
  std::span<const double> output_encoder() const { return slice(layout_->output_encoder.begin, layout_->output_encoder.end); }
  std::span<const double> qnet() const { return slice(layout_->qnet.begin, layout_->qnet.end); }

  std::uint64_t version() const { return version_; }
  void set_version(std::uint64_t v) { version_ = v; }
  void bump_version() { ++version_; }

  /// Weights uniform in ±sqrt(6 / (fan_in + fan_out)), biases zero. GRU
  /// blocks use fan_out = hidden size per gate.
  void glorot_init(Rng& rng);

  bool all_finite() const;
  bool same_values(const ParamSet& other) const;

 private:
  std::span<const double> slice(std::size_t b, std::size_t e) const {
    return std::span<const double>(values_).subspan(b, e - b);
  }

  std::shared_ptr<const NetworkLayout> layout_;
  FlatVector values_;
  std::uint64_t version_ = 0;
};

}  // namespace qadra::nn
