// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qadra/nn/params.hpp"

namespace qadra::nn {

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Rescale the gradient to this global L2 norm when exceeded.
  std::optional<double> max_grad_norm;

  void validate() const;
};

class Adam {
 public:
  Adam(AdamConfig config, std::size_t n_params);

  /// One update on `params`; bumps the parameter version. Throws
  /// std::invalid_argument on a size mismatch and std::runtime_error on a
  /// non-finite gradient (parameters left untouched).
  void step(ParamSet& params, std::span<const double> grad);

  std::int64_t steps() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  AdamConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::int64_t t_ = 0;
};

}  // namespace qadra::nn
