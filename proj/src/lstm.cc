// Copyright 2026 The Curriculum Syllabus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "curriculum/lstm.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace curriculum {
namespace {

using Eigen::MatrixXd;
using StridedMap = Eigen::Map<MatrixXd, 0, Eigen::OuterStride<>>;
using ConstStridedMap = Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>>;

// Columns (b * time + t) for all b, as a [rows x batch] view.
StridedMap StepCols(MatrixXd& m, int t, int batch, int time) {
  const Eigen::Index rows = m.rows();
  return StridedMap(m.data() + t * rows, rows, batch, Eigen::OuterStride<>(rows * time));
}

ConstStridedMap StepCols(const MatrixXd& m, int t, int batch, int time) {
  const Eigen::Index rows = m.rows();
  return ConstStridedMap(m.data() + t * rows, rows, batch,
                         Eigen::OuterStride<>(rows * time));
}

template <typename Derived>
auto SigmoidOf(const Eigen::ArrayBase<Derived>& x) {
  return (1.0 + (-x).exp()).inverse();
}

void CheckBatchShape(const NetParams& params, const ExampleBatch& batch) {
  const LstmShape& shape = params.shape();
  if (batch.input_dim != shape.input_dim) {
    throw StructuralError("batch has " + std::to_string(batch.input_dim) +
                          " input channels, network expects " +
                          std::to_string(shape.input_dim));
  }
  if (batch.target_dim != shape.output_dim) {
    throw StructuralError("batch has " + std::to_string(batch.target_dim) +
                          " target channels, network emits " +
                          std::to_string(shape.output_dim));
  }
  const size_t cells = static_cast<size_t>(batch.batch) * batch.time;
  if (batch.inputs.size() != cells * batch.input_dim ||
      batch.targets.size() != cells * batch.target_dim || batch.loss_mask.size() != cells) {
    throw StructuralError("batch arrays do not match their declared shape");
  }
}

}  // namespace

void LstmShape::Validate() const {
  if (input_dim < 1 || hidden < 1 || layers < 1 || output_dim < 1) {
    throw std::invalid_argument("LSTM dimensions must be positive");
  }
}

NetParams::NetParams(const LstmShape& shape) : shape_(shape) {
  shape.Validate();
  const size_t h = shape.hidden;
  size_t offset = 0;
  for (int l = 0; l < shape.layers; ++l) {
    LayerOffsets o;
    o.w = offset;
    offset += 4 * h * shape.layer_input_dim(l);
    o.u = offset;
    offset += 4 * h * h;
    o.b = offset;
    offset += 4 * h;
    layer_offsets_.push_back(o);
  }
  v_offset_ = offset;
  offset += static_cast<size_t>(shape.output_dim) * h;
  c_offset_ = offset;
  offset += shape.output_dim;
  values_.assign(offset, 0.0);
}

MatrixMap NetParams::W(int layer) {
  return {values_.data() + layer_offsets_.at(layer).w, 4 * shape_.hidden,
          shape_.layer_input_dim(layer)};
}
MatrixMap NetParams::U(int layer) {
  return {values_.data() + layer_offsets_.at(layer).u, 4 * shape_.hidden, shape_.hidden};
}
VectorMap NetParams::b(int layer) {
  return {values_.data() + layer_offsets_.at(layer).b, 4 * shape_.hidden};
}
MatrixMap NetParams::V() {
  return {values_.data() + v_offset_, shape_.output_dim, shape_.hidden};
}
VectorMap NetParams::c() { return {values_.data() + c_offset_, shape_.output_dim}; }

ConstMatrixMap NetParams::W(int layer) const {
  return {values_.data() + layer_offsets_.at(layer).w, 4 * shape_.hidden,
          shape_.layer_input_dim(layer)};
}
ConstMatrixMap NetParams::U(int layer) const {
  return {values_.data() + layer_offsets_.at(layer).u, 4 * shape_.hidden, shape_.hidden};
}
ConstVectorMap NetParams::b(int layer) const {
  return {values_.data() + layer_offsets_.at(layer).b, 4 * shape_.hidden};
}
ConstMatrixMap NetParams::V() const {
  return {values_.data() + v_offset_, shape_.output_dim, shape_.hidden};
}
ConstVectorMap NetParams::c() const {
  return {values_.data() + c_offset_, shape_.output_dim};
}

std::vector<NetParams::Block> NetParams::Blocks() const {
  std::vector<Block> blocks;
  for (int l = 0; l < shape_.layers; ++l) {
    const std::string suffix = std::to_string(l);
    blocks.push_back(
        {"W" + suffix, layer_offsets_[l].w, 4 * shape_.hidden, shape_.layer_input_dim(l)});
    blocks.push_back({"U" + suffix, layer_offsets_[l].u, 4 * shape_.hidden, shape_.hidden});
    blocks.push_back({"b" + suffix, layer_offsets_[l].b, 4 * shape_.hidden, 1});
  }
  blocks.push_back({"V", v_offset_, shape_.output_dim, shape_.hidden});
  blocks.push_back({"c", c_offset_, shape_.output_dim, 1});
  return blocks;
}

bool NetParams::AllFinite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

NetParams InitParams(const LstmShape& shape, Rng& rng) {
  NetParams params(shape);
  auto fill = [&rng](auto&& m) {
    const double r = std::sqrt(6.0 / static_cast<double>(m.cols() + m.rows()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = r * (2.0 * UniformUnit(rng) - 1.0);
    }
  };
  const int h = shape.hidden;
  for (int l = 0; l < shape.layers; ++l) {
    fill(params.W(l));
    fill(params.U(l));
    params.b(l).segment(h, h).setOnes();
  }
  fill(params.V());
  return params;
}

ForwardTrace Forward(const NetParams& params, const ExampleBatch& batch) {
  CheckBatchShape(params, batch);
  const LstmShape& shape = params.shape();
  const int B = batch.batch;
  const int T = batch.time;
  const int H = shape.hidden;
  const Eigen::Index BT = static_cast<Eigen::Index>(B) * T;

  ForwardTrace trace;
  trace.batch = B;
  trace.time = T;
  trace.layers.resize(shape.layers);

  for (int l = 0; l < shape.layers; ++l) {
    const MatrixXd* below = l > 0 ? &trace.layers[l - 1].hidden : nullptr;
    ConstMatrixMap x = below != nullptr
                           ? ConstMatrixMap(below->data(), H, BT)
                           : ConstMatrixMap(batch.inputs.data(), shape.input_dim, BT);
    ForwardTrace::Layer& layer = trace.layers[l];
    layer.gates.noalias() = params.W(l) * x;
    layer.gates.colwise() += params.b(l);
    layer.cells.resize(H, BT);
    layer.hidden.resize(H, BT);

    for (int t = 0; t < T; ++t) {
      StridedMap z = StepCols(layer.gates, t, B, T);
      if (t > 0) z.noalias() += params.U(l) * StepCols(layer.hidden, t - 1, B, T);
      z.topRows(2 * H) = SigmoidOf(z.topRows(2 * H).array()).matrix();
      z.middleRows(2 * H, H) = z.middleRows(2 * H, H).array().tanh().matrix();
      z.bottomRows(H) = SigmoidOf(z.bottomRows(H).array()).matrix();

      StridedMap cell = StepCols(layer.cells, t, B, T);
      auto in = z.topRows(H).array();
      auto cand = z.middleRows(2 * H, H).array();
      if (t > 0) {
        auto forget = z.middleRows(H, H).array();
        cell = (forget * StepCols(layer.cells, t - 1, B, T).array() + in * cand).matrix();
      } else {
        cell = (in * cand).matrix();
      }
      StepCols(layer.hidden, t, B, T) =
          (z.bottomRows(H).array() * cell.array().tanh()).matrix();
    }
  }

  trace.logits.noalias() = params.V() * trace.layers.back().hidden;
  trace.logits.colwise() += params.c();
  if (!trace.logits.allFinite()) throw NumericFault("non-finite logits in forward pass");
  return trace;
}

std::vector<double> Sigmoid(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  for (size_t i = 0; i < logits.size(); ++i) out[i] = 1.0 / (1.0 + std::exp(-logits[i]));
  return out;
}

double Loss(std::span<const double> logits, const ExampleBatch& batch) {
  if (logits.size() != batch.targets.size()) {
    throw StructuralError("loss: logits have " + std::to_string(logits.size()) +
                          " entries, targets have " +
                          std::to_string(batch.targets.size()));
  }
  const size_t dim = static_cast<size_t>(batch.target_dim);
  double total = 0.0;
  for (size_t step = 0; step < batch.loss_mask.size(); ++step) {
    if (!batch.loss_mask[step]) continue;
    for (size_t d = 0; d < dim; ++d) {
      const double z = logits[step * dim + d];
      const double y = batch.targets[step * dim + d];
      total += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
    }
  }
  return total / batch.batch;
}

NetParams Backward(const NetParams& params, const ForwardTrace& trace,
                   const ExampleBatch& batch) {
  CheckBatchShape(params, batch);
  const LstmShape& shape = params.shape();
  const int B = batch.batch;
  const int T = batch.time;
  const int H = shape.hidden;
  const Eigen::Index BT = static_cast<Eigen::Index>(B) * T;
  if (trace.batch != B || trace.time != T ||
      trace.layers.size() != static_cast<size_t>(shape.layers) ||
      trace.logits.rows() != shape.output_dim || trace.logits.cols() != BT) {
    throw StructuralError("forward trace does not belong to this batch and network");
  }

  NetParams grads(shape);

  ConstMatrixMap targets(batch.targets.data(), shape.output_dim, BT);
  MatrixXd d_logits = SigmoidOf(trace.logits.array()).matrix() - targets;
  for (Eigen::Index col = 0; col < BT; ++col) {
    if (batch.loss_mask[col]) {
      d_logits.col(col) /= B;
    } else {
      d_logits.col(col).setZero();
    }
  }

  grads.V().noalias() = d_logits * trace.layers.back().hidden.transpose();
  grads.c() = d_logits.rowwise().sum();
  MatrixXd d_hidden = params.V().transpose() * d_logits;

  MatrixXd d_gates(4 * H, BT);
  MatrixXd prev_hidden(H, BT);
  MatrixXd dh(H, B), dc(H, B), dh_next(H, B), dc_next(H, B);
  for (int l = shape.layers - 1; l >= 0; --l) {
    const ForwardTrace::Layer& layer = trace.layers[l];
    dh_next.setZero();
    dc_next.setZero();
    for (int t = T - 1; t >= 0; --t) {
      ConstStridedMap gates = StepCols(layer.gates, t, B, T);
      auto in = gates.topRows(H).array();
      auto forget = gates.middleRows(H, H).array();
      auto cand = gates.middleRows(2 * H, H).array();
      auto out = gates.bottomRows(H).array();
      const Eigen::ArrayXXd cell_tanh = StepCols(layer.cells, t, B, T).array().tanh();

      dh = StepCols(d_hidden, t, B, T) + dh_next;
      dc = (dh.array() * out * (1.0 - cell_tanh.square())).matrix() + dc_next;

      StridedMap dz = StepCols(d_gates, t, B, T);
      dz.topRows(H) = (dc.array() * cand * in * (1.0 - in)).matrix();
      if (t > 0) {
        dz.middleRows(H, H) = (dc.array() * StepCols(layer.cells, t - 1, B, T).array() *
                               forget * (1.0 - forget))
                                  .matrix();
      } else {
        dz.middleRows(H, H).setZero();
      }
      dz.middleRows(2 * H, H) = (dc.array() * in * (1.0 - cand.square())).matrix();
      dz.bottomRows(H) = (dh.array() * cell_tanh * out * (1.0 - out)).matrix();

      dc_next = (dc.array() * forget).matrix();
      dh_next.noalias() = params.U(l).transpose() * dz;
    }

    StepCols(prev_hidden, 0, B, T).setZero();
    for (int t = 1; t < T; ++t) {
      StepCols(prev_hidden, t, B, T) = StepCols(layer.hidden, t - 1, B, T);
    }
    const MatrixXd* below = l > 0 ? &trace.layers[l - 1].hidden : nullptr;
    ConstMatrixMap x = below != nullptr
                           ? ConstMatrixMap(below->data(), H, BT)
                           : ConstMatrixMap(batch.inputs.data(), shape.input_dim, BT);
    grads.W(l).noalias() = d_gates * x.transpose();
    grads.U(l).noalias() = d_gates * prev_hidden.transpose();
    grads.b(l) = d_gates.rowwise().sum();
    if (l > 0) d_hidden.noalias() = params.W(l).transpose() * d_gates;
  }
  return grads;
}

}  // namespace curriculum
