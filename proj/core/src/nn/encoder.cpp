// Copyright 2026 The qadra-sched Authors
// SPDX-License-Identifier: Apache-2.0

#include "qadra/nn/encoder.hpp"

#include <stdexcept>

#include "layers.hpp"

namespace qadra::nn {

EncoderState EncoderState::zeros(const EncoderLayout& layout) {
  EncoderState s;
  for (const auto& g : layout.gru) s.hidden.push_back(Vector::Zero(g.hidden));
  return s;
}

int EncoderState::dim() const {
  int d = 0;
  for (const auto& h : hidden) d += static_cast<int>(h.size());
  return d;
}

void encoder_step(const EncoderLayout& layout, std::span<const double> params,
                  const Eigen::Ref<const Vector>& x, EncoderState& state) {
  if (x.size() != layout.input_dim) throw std::invalid_argument("encoder input has wrong size");
  if (state.hidden.size() != layout.gru.size()) throw std::invalid_argument("encoder state has wrong shape");
  Vector a = x;
  for (const auto& l : layout.dense) {
    a = (detail::weight(l, params) * a + detail::bias(l, params)).cwiseMax(0.0);
  }
  for (std::size_t i = 0; i < layout.gru.size(); ++i) {
    const GruLayout& g = layout.gru[i];
    const auto h = g.hidden;
    const auto W = detail::gru_w(g, params);
    const auto U = detail::gru_u(g, params);
    const auto b = detail::gru_b(g, params);
    const Vector& hp = state.hidden[i];
    const Vector ax = W * a + b;
    const Vector uzr = U.topRows(2 * h) * hp;
    const Vector z = detail::sigmoid(ax.head(h) + uzr.head(h));
    const Vector r = detail::sigmoid(ax.segment(h, h) + uzr.tail(h));
    const Vector n = (ax.tail(h) + U.bottomRows(h) * r.cwiseProduct(hp)).array().tanh().matrix();
    Vector next = (Vector::Ones(h) - z).cwiseProduct(hp) + z.cwiseProduct(n);
    state.hidden[i] = std::move(next);
    a = state.hidden[i];
  }
}

Vector encode_sequence(const EncoderLayout& layout, std::span<const double> params,
                       const Matrix& inputs) {
  EncoderState s = EncoderState::zeros(layout);
  for (Eigen::Index t = 0; t < inputs.cols(); ++t) encoder_step(layout, params, inputs.col(t), s);
  return s.output();
}

void EncoderTape::forward(const Matrix& inputs) {
  const EncoderLayout& layout = *layout_;
  if (inputs.rows() != layout.input_dim) throw std::invalid_argument("encoder input has wrong size");
  const Eigen::Index T = inputs.cols();

  dense_acts_.clear();
  dense_acts_.push_back(inputs);
  for (const auto& l : layout.dense) {
    Matrix pre = detail::weight(l, params_) * dense_acts_.back();
    pre.colwise() += detail::bias(l, params_);
    dense_acts_.push_back(pre.cwiseMax(0.0));
  }

  gru_.clear();
  for (std::size_t li = 0; li < layout.gru.size(); ++li) {
    const GruLayout& g = layout.gru[li];
    const auto h = g.hidden;
    const auto W = detail::gru_w(g, params_);
    const auto U = detail::gru_u(g, params_);
    const auto b = detail::gru_b(g, params_);
    GruTrace tr;
    tr.x = li == 0 ? dense_acts_.back() : Matrix(gru_.back().h.rightCols(T));
    tr.h = Matrix::Zero(h, T + 1);
    tr.z.resize(h, T);
    tr.r.resize(h, T);
    tr.n.resize(h, T);
    Matrix ax = W * tr.x;
    ax.colwise() += b;
    for (Eigen::Index t = 0; t < T; ++t) {
      const Vector hp = tr.h.col(t);
      const Vector uzr = U.topRows(2 * h) * hp;
      tr.z.col(t) = detail::sigmoid(ax.col(t).head(h) + uzr.head(h));
      tr.r.col(t) = detail::sigmoid(ax.col(t).segment(h, h) + uzr.tail(h));
      const Vector rh = tr.r.col(t).cwiseProduct(hp);
      tr.n.col(t) = (ax.col(t).tail(h) + U.bottomRows(h) * rh).array().tanh().matrix();
      tr.h.col(t + 1) = (1.0 - tr.z.col(t).array()).matrix().cwiseProduct(hp) +
                        tr.z.col(t).cwiseProduct(tr.n.col(t));
    }
    gru_.push_back(std::move(tr));
  }
  outputs_ = gru_.back().h.rightCols(T);
}

Vector EncoderTape::final_output() const {
  if (outputs_.cols() == 0) return Vector::Zero(layout_->output_dim());
  return outputs_.col(outputs_.cols() - 1);
}

void EncoderTape::backward(const Matrix& d_outputs, std::span<double> grad) const {
  const EncoderLayout& layout = *layout_;
  const Eigen::Index T = outputs_.cols();
  if (d_outputs.rows() != outputs_.rows() || d_outputs.cols() != T) {
    throw std::invalid_argument("encoder output gradient has wrong shape");
  }
  if (T == 0) return;

  Matrix d_h = d_outputs;  // gradient w.r.t. the current layer's outputs
  for (std::size_t li = layout.gru.size(); li-- > 0;) {
    const GruLayout& g = layout.gru[li];
    const GruTrace& tr = gru_[li];
    const auto h = g.hidden;
    const auto W = detail::gru_w(g, params_);
    const auto U = detail::gru_u(g, params_);

    Matrix d_a(3 * h, T);
    Matrix rh(h, T);
    Vector dh_next = Vector::Zero(h);
    for (Eigen::Index t = T; t-- > 0;) {
      const auto hp = tr.h.col(t);
      const auto z = tr.z.col(t);
      const auto r = tr.r.col(t);
      const auto n = tr.n.col(t);
      const Vector dh = d_h.col(t) + dh_next;

      const Vector dn = dh.cwiseProduct(z);
      const Vector dz = dh.cwiseProduct(n - hp);
      Vector dhp = dh.cwiseProduct((1.0 - z.array()).matrix());

      const Vector dan = dn.cwiseProduct((1.0 - n.array().square()).matrix());
      const Vector drh = U.bottomRows(h).transpose() * dan;
      const Vector dr = drh.cwiseProduct(hp);
      dhp += drh.cwiseProduct(r);

      const Vector daz = dz.cwiseProduct((z.array() * (1.0 - z.array())).matrix());
      const Vector dar = dr.cwiseProduct((r.array() * (1.0 - r.array())).matrix());
      d_a.col(t).head(h) = daz;
      d_a.col(t).segment(h, h) = dar;
      d_a.col(t).tail(h) = dan;
      dhp += U.topRows(2 * h).transpose() * d_a.col(t).head(2 * h);

      rh.col(t) = r.cwiseProduct(hp);
      dh_next = dhp;
    }

    auto gW = detail::gru_w(g, grad);
    auto gU = detail::gru_u(g, grad);
    auto gb = detail::gru_b(g, grad);
    gW.noalias() += d_a * tr.x.transpose();
    gb += d_a.rowwise().sum();
    gU.topRows(2 * h).noalias() += d_a.topRows(2 * h) * tr.h.leftCols(T).transpose();
    gU.bottomRows(h).noalias() += d_a.bottomRows(h) * rh.transpose();
    d_h = W.transpose() * d_a;
  }

  for (std::size_t li = layout.dense.size(); li-- > 0;) {
    const DenseLayout& l = layout.dense[li];
    const Matrix& out = dense_acts_[li + 1];
    const Matrix d_pre = d_h.cwiseProduct((out.array() > 0.0).cast<double>().matrix());
    detail::weight(l, grad).noalias() += d_pre * dense_acts_[li].transpose();
    detail::bias(l, grad) += d_pre.rowwise().sum();
    if (li > 0) d_h = detail::weight(l, params_).transpose() * d_pre;
  }
}

}  // namespace qadra::nn
