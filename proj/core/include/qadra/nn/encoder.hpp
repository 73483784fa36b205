// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qadra/nn/arch.hpp"

namespace qadra::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Hidden states of the GRU stack (the recurrent state d).
struct EncoderState {
  std::vector<Vector> hidden;

  static EncoderState zeros(const EncoderLayout& layout);
  const Vector& output() const { return hidden.back(); }
  int dim() const;
};

/// s, d ← h(x, d; params) for one list element. `params` is the whole Γ
/// array; the layout carries absolute offsets.
void encoder_step(const EncoderLayout& layout, std::span<const double> params,
                  const Eigen::Ref<const Vector>& x, EncoderState& state);

/// Final encoding of a whole list (zero vector for an empty list).
Vector encode_sequence(const EncoderLayout& layout, std::span<const double> params,
                       const Matrix& inputs);

/// Recorded forward pass over a list, starting from the zero state, that
/// supports backpropagation through time.
class EncoderTape {
 public:
  EncoderTape(const EncoderLayout& layout, std::span<const double> params)
      : layout_(&layout), params_(params) {}

  /// inputs: input_dim × T.
  void forward(const Matrix& inputs);

  /// Top GRU state after each step: output_dim × T.
  const Matrix& outputs() const { return outputs_; }
  Vector final_output() const;
  int steps() const { return static_cast<int>(outputs_.cols()); }

  /// Accumulates dL/dparams into `grad` (whole-Γ sized) given dL/d outputs.
  void backward(const Matrix& d_outputs, std::span<double> grad) const;

 private:
  struct GruTrace {
    Matrix x;  // in × T
    Matrix h;  // hidden × (T + 1), column 0 is the zero initial state
    Matrix z, r, n;
  };

  const EncoderLayout* layout_;
  std::span<const double> params_;
  std::vector<Matrix> dense_acts_;  // [input, relu(layer 1), ...]
  std::vector<GruTrace> gru_;
  Matrix outputs_;
};

}  // namespace qadra::nn
