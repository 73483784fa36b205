// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qadra::nn {

/// List encoder: ReLU dense stack followed by a stack of GRU layers. The
/// top GRU state is the list encoding.
struct EncoderArch {
  std::vector<int> dense{256, 128};
  std::vector<int> gru{64, 32, 32};

  bool operator==(const EncoderArch&) const = default;
};

/// Both list encoders share EncoderArch (separate parameters). The
/// Q-network sees [s_in, s_out, x] and has ReLU hidden layers and a
/// linear scalar output.
struct NetworkArch {
  int feature_dim = 6;
  EncoderArch encoder;
  std::vector<int> q_hidden{512, 256, 128, 64};

  int state_dim() const { return encoder.gru.back(); }
  int q_input_dim() const { return feature_dim + 2 * state_dim(); }

  /// Throws std::invalid_argument on empty GRU stack or non-positive sizes.
  void validate() const;
  std::string describe() const;

  bool operator==(const NetworkArch&) const = default;
};

struct DenseLayout {
  int in = 0;
  int out = 0;
  std::size_t weight = 0;  // out × in, column-major
  std::size_t bias = 0;
  std::size_t size() const { return static_cast<std::size_t>(out) * (in + 1); }
};

/// Gate order inside the stacked blocks is [update z; reset r; candidate n].
struct GruLayout {
  int in = 0;
  int hidden = 0;
  std::size_t w = 0;  // 3h × in
  std::size_t u = 0;  // 3h × h
  std::size_t b = 0;  // 3h
  std::size_t size() const { return 3 * static_cast<std::size_t>(hidden) * (in + hidden + 1); }
};

struct EncoderLayout {
  int input_dim = 0;
  std::vector<DenseLayout> dense;
  std::vector<GruLayout> gru;
  std::size_t begin = 0;
  std::size_t end = 0;

  int output_dim() const { return gru.back().hidden; }
};

struct QNetLayout {
  std::vector<DenseLayout> layers;  // last one has out = 1
  std::size_t begin = 0;
  std::size_t end = 0;

  int input_dim() const { return layers.front().in; }
};

/// Flat parameter layout Γ = {φ, θ, ψ}: input encoder, output encoder,
/// Q-network, in that order.
struct NetworkLayout {
  explicit NetworkLayout(const NetworkArch& arch);

  NetworkArch arch;
  EncoderLayout input_encoder;
  EncoderLayout output_encoder;
  QNetLayout qnet;
  std::size_t total = 0;
};

}  // namespace qadra::nn
