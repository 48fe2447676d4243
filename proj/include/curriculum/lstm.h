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

// Stacked LSTM with a linear read-out, sigmoid cross-entropy loss and exact
// backpropagation through time.
//
// Per layer l the gate pre-activations are z = W_l x + U_l h_prev + b_l with
// row blocks ordered (input, forget, cell candidate, output), each of height
// `hidden`. The read-out is logits = V h_top + c at every timestep.
//
// Activations are stored with one column per (sample, timestep), column
// index b * time + t, so an [rows x batch*time] column-major matrix has
// exactly the row-major [batch x time x rows] layout of ExampleBatch.

#ifndef CURRICULUM_LSTM_H_
#define CURRICULUM_LSTM_H_

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "curriculum/common.h"
#include "curriculum/tasks.h"

namespace curriculum {

struct LstmShape {
  int input_dim = 0;
  int hidden = 0;
  int layers = 0;
  int output_dim = 0;

  int layer_input_dim(int layer) const { return layer == 0 ? input_dim : hidden; }
  void Validate() const;

  friend bool operator==(const LstmShape&, const LstmShape&) = default;
};

using MatrixMap = Eigen::Map<Eigen::MatrixXd>;
using ConstMatrixMap = Eigen::Map<const Eigen::MatrixXd>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

// All network weights in one contiguous buffer; the accessors return views.
// Gradients and optimizer moments use the same type, so they share layout.
class NetParams {
 public:
  NetParams() = default;
  // Zero-filled parameters of the given shape.
  explicit NetParams(const LstmShape& shape);

  const LstmShape& shape() const { return shape_; }
  size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  MatrixMap W(int layer);  // [4H x D_l]
  MatrixMap U(int layer);  // [4H x H]
  VectorMap b(int layer);  // [4H]
  MatrixMap V();           // [output_dim x H]
  VectorMap c();           // [output_dim]
  ConstMatrixMap W(int layer) const;
  ConstMatrixMap U(int layer) const;
  ConstVectorMap b(int layer) const;
  ConstMatrixMap V() const;
  ConstVectorMap c() const;

  // Stable names of the weight blocks, in buffer order ("W0", "U0", ...).
  struct Block {
    std::string name;
    size_t offset;
    int rows;
    int cols;
  };
  std::vector<Block> Blocks() const;

  bool AllFinite() const;

  friend bool operator==(const NetParams&, const NetParams&) = default;

 private:
  struct LayerOffsets {
    size_t w, u, b;
    friend bool operator==(const LayerOffsets&, const LayerOffsets&) = default;
  };

  LstmShape shape_;
  std::vector<LayerOffsets> layer_offsets_;
  size_t v_offset_ = 0;
  size_t c_offset_ = 0;
  AlignedVector values_;
};

// Uniform(-r, r) with r = sqrt(6 / (fan_in + fan_out)) for every matrix,
// forget-gate bias 1, all other biases 0.
NetParams InitParams(const LstmShape& shape, Rng& rng);

// Everything the backward pass needs from one forward pass.
struct ForwardTrace {
  int batch = 0;
  int time = 0;
  struct Layer {
    Eigen::MatrixXd gates;   // [4H x BT] post-activation (i, f, g, o)
    Eigen::MatrixXd cells;   // [H x BT]
    Eigen::MatrixXd hidden;  // [H x BT]
  };
  std::vector<Layer> layers;
  Eigen::MatrixXd logits;  // [output_dim x BT]

  // Row-major [batch x time x output_dim] view of the logits.
  std::span<const double> logit_values() const {
    return {logits.data(), static_cast<size_t>(logits.size())};
  }
};

// Runs the network from zero initial state. Throws StructuralError on a
// shape mismatch and NumericFault if any logit is non-finite.
ForwardTrace Forward(const NetParams& params, const ExampleBatch& batch);

// sigmoid(logits), laid out like batch.targets.
std::vector<double> Sigmoid(std::span<const double> logits);

// Mean over the batch of the masked sigmoid cross-entropy sum.
double Loss(std::span<const double> logits, const ExampleBatch& batch);

// Exact gradient of Loss with respect to every parameter.
NetParams Backward(const NetParams& params, const ForwardTrace& trace,
                   const ExampleBatch& batch);

}  // namespace curriculum

#endif  // CURRICULUM_LSTM_H_
