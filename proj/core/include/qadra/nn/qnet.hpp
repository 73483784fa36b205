// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qadra/nn/arch.hpp"

namespace qadra::nn {

/// Q values for a batch of inputs (q_input_dim × M), one per column.
Eigen::RowVectorXd q_forward(const QNetLayout& layout, std::span<const double> params,
                             const Eigen::MatrixXd& inputs);

/// Q(s_in, s_out, x) for a single candidate.
double q_value(const QNetLayout& layout, std::span<const double> params,
               const Eigen::VectorXd& s_in, const Eigen::VectorXd& s_out,
               const Eigen::VectorXd& x);

/// Stacks [s_in; s_out; x_j] for every column x_j of `candidates`.
Eigen::MatrixXd q_inputs(const Eigen::VectorXd& s_in, const Eigen::VectorXd& s_out,
                         const Eigen::MatrixXd& candidates);

class QNetTape {
 public:
  QNetTape(const QNetLayout& layout, std::span<const double> params)
      : layout_(&layout), params_(params) {}

  const Eigen::RowVectorXd& forward(const Eigen::MatrixXd& inputs);

  /// Accumulates dL/dψ into `grad` (whole-Γ sized). When `d_inputs` is set it
  /// receives dL/d inputs (q_input_dim × M).
  void backward(const Eigen::RowVectorXd& d_q, std::span<double> grad,
                Eigen::MatrixXd* d_inputs) const;

 private:
  const QNetLayout* layout_;
  std::span<const double> params_;
  std::vector<Eigen::MatrixXd> acts_;
  Eigen::RowVectorXd q_;
};

}  // namespace qadra::nn
