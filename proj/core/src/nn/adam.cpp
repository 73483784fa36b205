// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace qadra::nn {

void AdamConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw std::invalid_argument("beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw std::invalid_argument("beta2 must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("adam epsilon must be > 0");
  if (max_grad_norm && !(*max_grad_norm > 0.0)) throw std::invalid_argument("max_grad_norm must be > 0");
}

Adam::Adam(AdamConfig config, std::size_t n_params)
    : config_(config), m_(n_params, 0.0), v_(n_params, 0.0) {
  config_.validate();
}

void Adam::step(ParamSet& params, std::span<const double> grad) {
  if (grad.size() != m_.size() || params.size() != m_.size()) {
    throw std::invalid_argument("gradient size does not match optimizer state");
  }
  double sq = 0.0;
  for (double g : grad) {
    if (!std::isfinite(g)) throw std::runtime_error("non-finite gradient");
    sq += g * g;
  }
  double scale = 1.0;
  if (config_.max_grad_norm) {
    const double norm = std::sqrt(sq);
    if (norm > *config_.max_grad_norm) scale = *config_.max_grad_norm / norm;
  }
  ++t_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  auto p = params.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double g = grad[i] * scale;
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    const double mhat = m_[i] / c1;
    const double vhat = v_[i] / c2;
    p[i] -= config_.learning_rate * mhat / (std::sqrt(vhat) + config_.epsilon);
  }
  params.bump_version();
}

}  // namespace qadra::nn
