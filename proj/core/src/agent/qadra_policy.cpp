// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/agent/qadra_policy.hpp"

#include <algorithm>
#include <stdexcept>

#include "qadra/agent/actor.hpp"
#include "qadra/agent/environment.hpp"

namespace qadra::agent {

QadraPolicy::QadraPolicy(std::shared_ptr<const nn::ParamSet> params, mdp::FeatureStats stats,
                         double saturation_bits)
    : params_(std::move(params)), stats_(std::move(stats)), saturation_bits_(saturation_bits) {
  if (!params_) throw std::invalid_argument("policy needs parameters");
  if (params_->arch().feature_dim != static_cast<int>(mdp::kFeatureDim)) {
    throw std::invalid_argument("network feature dimension does not match the simulator");
  }
  if (!stats_.finalized()) throw std::invalid_argument("policy needs frozen feature statistics");
}

mdp::FeatureStats stats_from_checkpoint(const nn::Checkpoint& ckpt) {
  if (ckpt.feature_mean.empty()) throw std::runtime_error("checkpoint holds no feature statistics (untrained)");
  if (ckpt.feature_mean.size() != mdp::kFeatureDim || ckpt.feature_std.size() != mdp::kFeatureDim) {
    throw std::runtime_error("checkpoint feature space does not match the simulator");
  }
  mdp::FeatureVector mean{}, sd{};
  std::copy(ckpt.feature_mean.begin(), ckpt.feature_mean.end(), mean.begin());
  std::copy(ckpt.feature_std.begin(), ckpt.feature_std.end(), sd.begin());
  return mdp::FeatureStats::from_moments(mean, sd);
}

std::unique_ptr<QadraPolicy> QadraPolicy::from_checkpoint(const nn::Checkpoint& ckpt, double saturation_bits) {
  if (ckpt.params.arch().feature_dim != static_cast<int>(mdp::kFeatureDim)) {
    throw std::runtime_error("checkpoint feature space does not match the simulator");
  }
  return std::make_unique<QadraPolicy>(std::make_shared<const nn::ParamSet>(ckpt.params),
                                       stats_from_checkpoint(ckpt), saturation_bits);
}

sim::FlowList QadraPolicy::sort(const sim::FlowList& flows, sim::Tti now) {
  const auto raw = flow_feature_matrix(flows, now, saturation_bits_);
  const auto d = actor_sort(params_.get(), normalize_columns(raw, stats_), 0.0, rng_);
  sim::FlowList out;
  out.reserve(flows.size());
  for (int i : d.order) out.push_back(flows[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace qadra::agent
