// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/nn/qnet.hpp"

#include <stdexcept>

#include "layers.hpp"

namespace qadra::nn {

Eigen::RowVectorXd q_forward(const QNetLayout& layout, std::span<const double> params,
                             const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != layout.input_dim()) throw std::invalid_argument("q-network input has wrong size");
  Eigen::MatrixXd a = inputs;
  for (std::size_t i = 0; i < layout.layers.size(); ++i) {
    const DenseLayout& l = layout.layers[i];
    Eigen::MatrixXd pre = detail::weight(l, params) * a;
    pre.colwise() += detail::bias(l, params);
    a = i + 1 < layout.layers.size() ? Eigen::MatrixXd(pre.cwiseMax(0.0)) : pre;
  }
  return a.row(0);
}

Eigen::MatrixXd q_inputs(const Eigen::VectorXd& s_in, const Eigen::VectorXd& s_out,
                         const Eigen::MatrixXd& candidates) {
  const Eigen::Index m = candidates.cols();
  Eigen::MatrixXd in(s_in.size() + s_out.size() + candidates.rows(), m);
  in.topRows(s_in.size()) = s_in.replicate(1, m);
  in.middleRows(s_in.size(), s_out.size()) = s_out.replicate(1, m);
  in.bottomRows(candidates.rows()) = candidates;
  return in;
}

double q_value(const QNetLayout& layout, std::span<const double> params,
               const Eigen::VectorXd& s_in, const Eigen::VectorXd& s_out,
               const Eigen::VectorXd& x) {
  return q_forward(layout, params, q_inputs(s_in, s_out, x))(0);
}

const Eigen::RowVectorXd& QNetTape::forward(const Eigen::MatrixXd& inputs) {
  const QNetLayout& layout = *layout_;
  if (inputs.rows() != layout.input_dim()) throw std::invalid_argument("q-network input has wrong size");
  acts_.clear();
  acts_.push_back(inputs);
  for (std::size_t i = 0; i < layout.layers.size(); ++i) {
    const DenseLayout& l = layout.layers[i];
    Eigen::MatrixXd pre = detail::weight(l, params_) * acts_.back();
    pre.colwise() += detail::bias(l, params_);
    if (i + 1 < layout.layers.size()) pre = pre.cwiseMax(0.0);
    acts_.push_back(std::move(pre));
  }
  q_ = acts_.back().row(0);
  return q_;
}

void QNetTape::backward(const Eigen::RowVectorXd& d_q, std::span<double> grad,
                        Eigen::MatrixXd* d_inputs) const {
  const QNetLayout& layout = *layout_;
  if (d_q.size() != q_.size()) throw std::invalid_argument("q gradient has wrong size");
  Eigen::MatrixXd d = d_q;
  for (std::size_t i = layout.layers.size(); i-- > 0;) {
    const DenseLayout& l = layout.layers[i];
    if (i + 1 < layout.layers.size()) {
      d = d.cwiseProduct((acts_[i + 1].array() > 0.0).cast<double>().matrix());
    }
    detail::weight(l, grad).noalias() += d * acts_[i].transpose();
    detail::bias(l, grad) += d.rowwise().sum();
    if (i > 0 || d_inputs != nullptr) d = detail::weight(l, params_).transpose() * d;
  }
  if (d_inputs != nullptr) *d_inputs = std::move(d);
}

}  // namespace qadra::nn
