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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "curriculum/optimizer.h"
#include "oracles.h"

namespace curriculum {
namespace {

using testing::DirectCrossEntropy;
using testing::FiniteDifferenceGradient;
using testing::ScalarLstmLogits;

ExampleBatch SmallBatch(Problem problem, TaskId task, int batch, uint64_t seed) {
  auto spec = ProblemSpec::Default(problem);
  spec.vector_dim = 3;
  Rng rng = MakeRng(seed, 0);
  return Generate(task, batch, spec, rng);
}

LstmShape ShapeFor(const ExampleBatch& batch, int hidden, int layers) {
  return {batch.input_dim, hidden, layers, batch.target_dim};
}

TEST(NetParamsTest, LayoutCoversBuffer) {
  const NetParams params({5, 4, 2, 3});
  size_t total = 0;
  for (const auto& block : params.Blocks()) total += static_cast<size_t>(block.rows) * block.cols;
  EXPECT_EQ(total, params.size());
  EXPECT_EQ(params.W(0).rows(), 16);
  EXPECT_EQ(params.W(0).cols(), 5);
  EXPECT_EQ(params.W(1).cols(), 4);
  EXPECT_EQ(params.V().rows(), 3);
}

TEST(NetParamsTest, InitializationFollowsGlorotAndForgetBias) {
  Rng rng = MakeRng(1, 0);
  const LstmShape shape{9, 16, 2, 8};
  const NetParams params = InitParams(shape, rng);
  const double r0 = std::sqrt(6.0 / (9 + 64));
  EXPECT_LE(params.W(0).cwiseAbs().maxCoeff(), r0);
  EXPECT_GT(params.W(0).cwiseAbs().maxCoeff(), 0.8 * r0);
  const double ru = std::sqrt(6.0 / (16 + 64));
  EXPECT_LE(params.U(1).cwiseAbs().maxCoeff(), ru);
  for (int l = 0; l < 2; ++l) {
    EXPECT_TRUE((params.b(l).segment(16, 16).array() == 1.0).all());
    EXPECT_TRUE((params.b(l).head(16).array() == 0.0).all());
    EXPECT_TRUE((params.b(l).tail(32).array() == 0.0).all());
  }
  EXPECT_TRUE((params.c().array() == 0.0).all());
}

TEST(ForwardTest, ZeroNetworkEmitsBias) {
  auto batch = SmallBatch(Problem::kCopy, {3, 1}, 2, 1);
  std::fill(batch.inputs.begin(), batch.inputs.end(), 0.0);
  NetParams params(ShapeFor(batch, 4, 2));
  params.c() << 0.5, -1.0, 2.0;
  const ForwardTrace trace = Forward(params, batch);
  for (const auto& layer : trace.layers) EXPECT_EQ(layer.hidden.cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index col = 0; col < trace.logits.cols(); ++col) {
    EXPECT_EQ(trace.logits.col(col), params.c());
  }
}

TEST(ForwardTest, HiddenStatesStayInOpenUnitInterval) {
  const auto batch = SmallBatch(Problem::kRepeatCopy, {3, 2}, 4, 2);
  Rng rng = MakeRng(2, 1);
  NetParams params = InitParams(ShapeFor(batch, 6, 2), rng);
  for (double& v : params.values()) v *= 5.0;
  const ForwardTrace trace = Forward(params, batch);
  for (const auto& layer : trace.layers) EXPECT_LT(layer.hidden.cwiseAbs().maxCoeff(), 1.0);
}

TEST(ForwardTest, MatchesScalarLoopOracle) {
  for (Problem p : {Problem::kCopy, Problem::kRepeatCopy, Problem::kAssociativeRecall}) {
    const TaskId task = p == Problem::kAssociativeRecall ? TaskId{3, 1} : TaskId{2, 2};
    const auto batch = SmallBatch(p, p == Problem::kCopy ? TaskId{3, 1} : task, 3, 3);
    Rng rng = MakeRng(3, static_cast<uint64_t>(p));
    NetParams params = InitParams(ShapeFor(batch, 4, 2), rng);
    for (double& v : params.values()) v += 0.1 * (UniformUnit(rng) - 0.5);
    const ForwardTrace trace = Forward(params, batch);
    const std::vector<double> oracle = ScalarLstmLogits(params, batch);
    const auto logits = trace.logit_values();
    ASSERT_EQ(logits.size(), oracle.size());
    for (size_t i = 0; i < oracle.size(); ++i) {
      EXPECT_NEAR(logits[i], oracle[i], 1e-10 * std::max(1.0, std::abs(oracle[i])));
    }
  }
}

TEST(ForwardTest, DimensionMismatchIsStructuralError) {
  const auto batch = SmallBatch(Problem::kCopy, {2, 1}, 1, 4);
  NetParams params({batch.input_dim + 1, 3, 1, batch.target_dim});
  EXPECT_THROW(Forward(params, batch), StructuralError);
}

TEST(ForwardTest, NonFiniteWeightsRaiseNumericFault) {
  const auto batch = SmallBatch(Problem::kCopy, {2, 1}, 1, 4);
  NetParams params(ShapeFor(batch, 3, 1));
  params.c()(0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Forward(params, batch), NumericFault);
}

TEST(LossTest, ZeroLogitsCostLn2PerMaskedBit) {
  const auto batch = SmallBatch(Problem::kCopy, {4, 1}, 3, 5);
  const std::vector<double> logits(batch.targets.size(), 0.0);
  EXPECT_NEAR(Loss(logits, batch), batch.MaskedBitsPerSequence() * std::log(2.0), 1e-12);
}

TEST(LossTest, SaturatedCorrectPredictionIsNearlyFree) {
  auto batch = SmallBatch(Problem::kCopy, {4, 1}, 2, 6);
  std::fill(batch.targets.begin(), batch.targets.end(), 1.0);
  const std::vector<double> logits(batch.targets.size(), 30.0);
  const double expected = batch.MaskedBitsPerSequence() * std::log1p(std::exp(-30.0));
  EXPECT_NEAR(Loss(logits, batch), expected, 1e-24);
  EXPECT_LT(expected, 1e-11);
}

TEST(LossTest, AgreesWithDirectCrossEntropy) {
  Rng rng = MakeRng(7, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto batch = SmallBatch(Problem::kRepeatCopy, {3, 2}, 4, 100 + trial);
    std::vector<double> logits(batch.targets.size());
    for (double& z : logits) z = 8.0 * (UniformUnit(rng) - 0.5);
    const double direct = DirectCrossEntropy(logits, batch);
    EXPECT_NEAR(Loss(logits, batch), direct, 1e-10 * std::max(1.0, direct));
  }
}

TEST(LossTest, UnmaskedStepsAreIgnored) {
  const auto batch = SmallBatch(Problem::kCopy, {3, 1}, 2, 8);
  std::vector<double> logits(batch.targets.size(), 0.0);
  const double base = Loss(logits, batch);
  for (int b = 0; b < batch.batch; ++b) {
    for (int t = 0; t < batch.time; ++t) {
      if (batch.masked(b, t)) continue;
      for (int d = 0; d < batch.target_dim; ++d) {
        logits[(static_cast<size_t>(b) * batch.time + t) * batch.target_dim + d] = 50.0;
      }
    }
  }
  EXPECT_EQ(Loss(logits, batch), base);
}

void ExpectGradientMatchesFiniteDifferences(const NetParams& params, const ExampleBatch& batch) {
  const NetParams grads = Backward(params, Forward(params, batch), batch);
  const std::vector<double> numeric = FiniteDifferenceGradient(params, batch, 1e-3);
  const auto analytic = grads.values();
  for (size_t i = 0; i < numeric.size(); ++i) {
    const double scale = std::max({std::abs(numeric[i]), std::abs(analytic[i]), 1e-6});
    EXPECT_LT(std::abs(numeric[i] - analytic[i]) / scale, 1e-4)
        << "coordinate " << i << ": analytic " << analytic[i] << " numeric " << numeric[i];
  }
}

TEST(BackwardTest, MatchesFiniteDifferencesOnEveryProblem) {
  Rng rng = MakeRng(21, 0);
  const std::vector<std::pair<Problem, TaskId>> cases = {
      {Problem::kCopy, {2, 1}},
      {Problem::kRepeatCopy, {2, 2}},
      {Problem::kAssociativeRecall, {2, 1}},
  };
  int trial = 0;
  for (const auto& [problem, task] : cases) {
    const auto batch = SmallBatch(problem, task, 2, 40 + trial++);
    NetParams params = InitParams(ShapeFor(batch, 3, 2), rng);
    for (double& v : params.values()) v += 0.2 * (UniformUnit(rng) - 0.5);
    ExpectGradientMatchesFiniteDifferences(params, batch);
  }
}

TEST(BackwardTest, NoMaskedStepsGiveZeroGradient) {
  auto batch = SmallBatch(Problem::kCopy, {3, 1}, 2, 9);
  std::fill(batch.loss_mask.begin(), batch.loss_mask.end(), 0);
  Rng rng = MakeRng(9, 1);
  const NetParams params = InitParams(ShapeFor(batch, 4, 2), rng);
  const NetParams grads = Backward(params, Forward(params, batch), batch);
  for (double g : grads.values()) EXPECT_EQ(g, 0.0);
}

TEST(BackwardTest, DuplicatedRowsLeaveGradientUnchanged) {
  const auto batch = SmallBatch(Problem::kCopy, {3, 1}, 2, 10);
  ExampleBatch doubled = batch;
  doubled.batch = 4;
  doubled.inputs.insert(doubled.inputs.end(), batch.inputs.begin(), batch.inputs.end());
  doubled.targets.insert(doubled.targets.end(), batch.targets.begin(), batch.targets.end());
  doubled.loss_mask.insert(doubled.loss_mask.end(), batch.loss_mask.begin(),
                           batch.loss_mask.end());
  Rng rng = MakeRng(10, 1);
  const NetParams params = InitParams(ShapeFor(batch, 5, 1), rng);
  const NetParams a = Backward(params, Forward(params, batch), batch);
  const NetParams b = Backward(params, Forward(params, doubled), doubled);
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.values()[i], b.values()[i], 1e-14 * std::max(1.0, std::abs(a.values()[i])));
  }
}

TEST(BackwardTest, ForeignTraceIsStructuralError) {
  const auto batch = SmallBatch(Problem::kCopy, {3, 1}, 2, 11);
  const auto other = SmallBatch(Problem::kCopy, {2, 1}, 2, 12);
  Rng rng = MakeRng(11, 1);
  const NetParams params = InitParams(ShapeFor(batch, 3, 1), rng);
  EXPECT_THROW(Backward(params, Forward(params, other), batch), StructuralError);
}

TEST(TrainingTest, OverfitsOneBatch) {
  const auto batch = SmallBatch(Problem::kCopy, {3, 1}, 4, 13);
  Rng rng = MakeRng(13, 1);
  NetParams params = InitParams(ShapeFor(batch, 16, 1), rng);
  AdamState adam(params.shape(), AdamConfig{});
  const double initial = Loss(Forward(params, batch).logit_values(), batch);
  for (int step = 0; step < 200; ++step) {
    NetParams grads = Backward(params, Forward(params, batch), batch);
    ClipGradients(grads, 10.0);
    AdamStep(params, grads, adam);
  }
  const double final_loss = Loss(Forward(params, batch).logit_values(), batch);
  EXPECT_LT(final_loss, 0.1 * initial);
}

TEST(TrainingTest, ForwardIsPure) {
  const auto batch = SmallBatch(Problem::kAssociativeRecall, {3, 1}, 2, 14);
  Rng rng = MakeRng(14, 1);
  const NetParams params = InitParams(ShapeFor(batch, 4, 2), rng);
  const NetParams before = params;
  const auto a = Forward(params, batch).logits;
  const auto b = Forward(params, batch).logits;
  EXPECT_EQ(a, b);
  EXPECT_EQ(params, before);
}

}  // namespace
}  // namespace curriculum
