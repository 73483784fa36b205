// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/nn/params.hpp"

#include <algorithm>
#include <cmath>

namespace qadra::nn {

ParamSet::ParamSet(const NetworkArch& arch)
    : layout_(std::make_shared<const NetworkLayout>(arch)), values_(layout_->total, 0.0) {}

namespace {

void fill_uniform(std::span<double> out, double limit, Rng& rng) {
  for (double& v : out) v = (2.0 * rng.uniform() - 1.0) * limit;
}

}  // namespace

void ParamSet::glorot_init(Rng& rng) {
  std::fill(values_.begin(), values_.end(), 0.0);
  std::span<double> all(values_);
  auto dense = [&](const DenseLayout& l) {
    fill_uniform(all.subspan(l.weight, static_cast<std::size_t>(l.in) * l.out),
                 std::sqrt(6.0 / (l.in + l.out)), rng);
  };
  auto encoder = [&](const EncoderLayout& e) {
    for (const auto& l : e.dense) dense(l);
    for (const auto& g : e.gru) {
      const auto h = static_cast<std::size_t>(g.hidden);
      fill_uniform(all.subspan(g.w, 3 * h * g.in), std::sqrt(6.0 / (g.in + g.hidden)), rng);
      fill_uniform(all.subspan(g.u, 3 * h * h), std::sqrt(6.0 / (2.0 * g.hidden)), rng);
    }
  };
  encoder(layout_->input_encoder);
  encoder(layout_->output_encoder);
  for (const auto& l : layout_->qnet.layers) dense(l);
}

bool ParamSet::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool ParamSet::same_values(const ParamSet& other) const {
  return layout_->arch == other.layout_->arch && values_ == other.values_;
}

}  // namespace qadra::nn
