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

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "curriculum/bandit.h"
#include "curriculum/checkpoint.h"
#include "curriculum/config.h"
#include "curriculum/harness.h"
#include "curriculum/lstm.h"
#include "curriculum/optimizer.h"
#include "curriculum/reporting.h"
#include "curriculum/stats.h"
#include "curriculum/syllabus.h"
#include "curriculum/tasks.h"

namespace py = pybind11;
using namespace curriculum;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array ToArray(std::span<const double> values, std::vector<py::ssize_t> shape) {
  Array out(shape);
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

std::span<const double> AsSpan(const Array& a) {
  return {a.data(), static_cast<size_t>(a.size())};
}

void CopyInto(std::span<double> dst, const Array& src, const char* what) {
  if (static_cast<size_t>(src.size()) != dst.size()) {
    throw StructuralError(std::string(what) + ": expected " + std::to_string(dst.size()) +
                          " values, got " + std::to_string(src.size()));
  }
  std::copy(src.data(), src.data() + src.size(), dst.begin());
}

py::array_t<uint8_t> MaskArray(const ExampleBatch& b) {
  py::array_t<uint8_t> out({b.batch, b.time});
  std::copy(b.loss_mask.begin(), b.loss_mask.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Curriculum syllabuses for LSTM sequence learning";

  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<NumericFault>(m, "NumericFault", PyExc_ArithmeticError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);

  // tasks
  py::enum_<Problem>(m, "Problem")
      .value("COPY", Problem::kCopy)
      .value("REPEAT_COPY", Problem::kRepeatCopy)
      .value("ASSOCIATIVE_RECALL", Problem::kAssociativeRecall);
  m.def("parse_problem", [](const std::string& s) { return ParseProblem(s); });
  m.def("problem_name", [](Problem p) { return std::string(ProblemName(p)); });

  py::class_<TaskId>(m, "TaskId")
      .def(py::init<int, int>(), py::arg("length"), py::arg("repeats") = 1)
      .def_readwrite("length", &TaskId::length)
      .def_readwrite("repeats", &TaskId::repeats)
      .def(py::self == py::self)
      .def("__repr__", [](const TaskId& t) { return "TaskId" + ToString(t); });

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def(py::init([](Problem p) { return ProblemSpec::Default(p); }), py::arg("problem"))
      .def_readwrite("problem", &ProblemSpec::problem)
      .def_readwrite("vector_dim", &ProblemSpec::vector_dim)
      .def_readwrite("max_length", &ProblemSpec::max_length)
      .def_readwrite("max_repeats", &ProblemSpec::max_repeats)
      .def_readwrite("success_threshold", &ProblemSpec::success_threshold)
      .def_readwrite("repeat_norm", &ProblemSpec::repeat_norm)
      .def_property_readonly("input_dim", &ProblemSpec::input_dim)
      .def_property_readonly("target_dim", &ProblemSpec::target_dim)
      .def_property_readonly("num_tasks", [](const ProblemSpec& s) { return NumTasks(s); })
      .def("flat_index", [](const ProblemSpec& s, const TaskId& t) { return FlatIndex(s, t); })
      .def("task_at", [](const ProblemSpec& s, int flat) { return TaskAt(s, flat); })
      .def("validate", &ProblemSpec::Validate);

  py::class_<ExampleBatch>(m, "ExampleBatch")
      .def_readonly("batch", &ExampleBatch::batch)
      .def_readonly("time", &ExampleBatch::time)
      .def_readonly("input_dim", &ExampleBatch::input_dim)
      .def_readonly("target_dim", &ExampleBatch::target_dim)
      .def_readonly("task", &ExampleBatch::task)
      .def_property_readonly("inputs", [](const ExampleBatch& b) {
        return ToArray(b.inputs, {b.batch, b.time, b.input_dim});
      })
      .def_property_readonly("targets", [](const ExampleBatch& b) {
        return ToArray(b.targets, {b.batch, b.time, b.target_dim});
      })
      .def_property_readonly("loss_mask", &MaskArray)
      .def_property_readonly("masked_bits_per_sequence", &ExampleBatch::MaskedBitsPerSequence);

  m.def(
      "generate",
      [](const ProblemSpec& spec, const TaskId& task, int batch, uint64_t seed) {
        Rng rng = MakeRng(seed, 0);
        return Generate(task, batch, spec, rng);
      },
      py::arg("spec"), py::arg("task"), py::arg("batch"), py::arg("seed"),
      "Examples of one task, drawn from a stream keyed by `seed`.");
  m.def(
      "bits_error", [](const Array& outputs, const ExampleBatch& b) {
        return BitsError(AsSpan(outputs), b);
      },
      py::arg("outputs"), py::arg("batch"));

  // model
  py::class_<LstmShape>(m, "LstmShape")
      .def(py::init<int, int, int, int>(), py::arg("input_dim"), py::arg("hidden"),
           py::arg("layers"), py::arg("output_dim"))
      .def_readonly("input_dim", &LstmShape::input_dim)
      .def_readonly("hidden", &LstmShape::hidden)
      .def_readonly("layers", &LstmShape::layers)
      .def_readonly("output_dim", &LstmShape::output_dim);

  py::class_<NetParams>(m, "NetParams")
      .def(py::init<const LstmShape&>())
      .def_property_readonly("shape", &NetParams::shape)
      .def_property(
          "values",
          [](const NetParams& p) { return ToArray(p.values(), {static_cast<py::ssize_t>(p.size())}); },
          [](NetParams& p, const Array& v) { CopyInto(p.values(), v, "values"); })
      .def("blocks",
           [](const NetParams& p) {
             py::dict out;
             for (const auto& b : p.Blocks()) {
               out[py::str(b.name)] = ToArray(p.values().subspan(b.offset, size_t(b.rows) * b.cols),
                                              {b.cols, b.rows}).attr("T");
             }
             return out;
           },
           "Weight blocks by name, as [rows x cols] arrays (copies).")
      .def(py::self == py::self);

  m.def(
      "init_params",
      [](const LstmShape& shape, uint64_t seed) {
        Rng rng = MakeRng(seed, 1);
        return InitParams(shape, rng);
      },
      py::arg("shape"), py::arg("seed"));
  m.def(
      "forward",
      [](const NetParams& params, const ExampleBatch& b) {
        const ForwardTrace trace = Forward(params, b);
        return ToArray(trace.logit_values(), {b.batch, b.time, params.shape().output_dim});
      },
      py::arg("params"), py::arg("batch"), "Logits, shaped like batch.targets.");
  m.def("sigmoid", [](const Array& logits) {
    const auto s = Sigmoid(AsSpan(logits));
    Array out(std::vector<py::ssize_t>(logits.shape(), logits.shape() + logits.ndim()));
    std::copy(s.begin(), s.end(), out.mutable_data());
    return out;
  });
  m.def(
      "loss", [](const Array& logits, const ExampleBatch& b) { return Loss(AsSpan(logits), b); },
      py::arg("logits"), py::arg("batch"));
  m.def(
      "backward",
      [](const NetParams& params, const ExampleBatch& b) {
        return Backward(params, Forward(params, b), b);
      },
      py::arg("params"), py::arg("batch"), "Gradient of the loss, congruent to params.");

  py::class_<AdamConfig>(m, "AdamConfig")
      .def(py::init<>())
      .def_readwrite("lr", &AdamConfig::lr)
      .def_readwrite("beta1", &AdamConfig::beta1)
      .def_readwrite("beta2", &AdamConfig::beta2)
      .def_readwrite("epsilon", &AdamConfig::epsilon);
  py::class_<AdamState>(m, "AdamState")
      .def(py::init<const LstmShape&, const AdamConfig&>(), py::arg("shape"),
           py::arg("config") = AdamConfig{})
      .def_readonly("step", &AdamState::step);
  m.def("adam_step", &AdamStep, py::arg("params"), py::arg("grads"), py::arg("state"));
  m.def("clip_gradients", &ClipGradients, py::arg("grads"), py::arg("max_norm"));

  py::class_<Checkpoint>(m, "Checkpoint")
      .def(py::init<>())
      .def_readwrite("config_hash", &Checkpoint::config_hash)
      .def_readwrite("step", &Checkpoint::step)
      .def_readwrite("params", &Checkpoint::params)
      .def(py::self == py::self);
  m.def("save_checkpoint", &SaveCheckpoint);
  m.def("load_checkpoint", &LoadCheckpoint);

  // syllabus
  py::enum_<SyllabusKind>(m, "SyllabusKind")
      .value("NONE", SyllabusKind::kNone)
      .value("UNIFORM", SyllabusKind::kUniform)
      .value("NAIVE", SyllabusKind::kNaive)
      .value("LOOK_BACK", SyllabusKind::kLookBack)
      .value("LOOK_BACK_AND_FORWARD", SyllabusKind::kLookBackAndForward)
      .value("PREDICTION_GAIN", SyllabusKind::kPredictionGain);
  m.def("parse_syllabus", [](const std::string& s) { return ParseSyllabus(s); });

  py::class_<SyllabusConfig>(m, "SyllabusConfig")
      .def(py::init([](SyllabusKind kind) {
             SyllabusConfig c;
             c.kind = kind;
             return c;
           }),
           py::arg("kind"))
      .def_readwrite("kind", &SyllabusConfig::kind)
      .def_readwrite("lookback_frac", &SyllabusConfig::lookback_frac)
      .def_readwrite("lbf_frac", &SyllabusConfig::lbf_frac)
      .def_readwrite("bandit_gamma", &SyllabusConfig::bandit_gamma)
      .def_readwrite("bandit_alpha", &SyllabusConfig::bandit_alpha);

  m.def(
      "distribution",
      [](const SyllabusConfig& config, const ProblemSpec& spec, const TaskId& current) {
        SyllabusState state;
        state.current = current;
        state.num_tasks = NumTasks(spec);
        return Distribution(config, state, spec).probabilities;
      },
      py::arg("config"), py::arg("spec"), py::arg("current"),
      "Probabilities over flat tasks 1..T (list index flat - 1).");
  m.def(
      "sample_tasks",
      [](const std::vector<double>& probabilities, int draws, uint64_t seed) {
        Rng rng = MakeRng(seed, 3);
        std::vector<int> out(draws);
        const TaskDistribution dist{probabilities};
        for (int& t : out) t = SampleTask(dist, rng);
        return out;
      },
      py::arg("probabilities"), py::arg("draws"), py::arg("seed"));
  m.def(
      "progress",
      [](const ProblemSpec& spec, const TaskId& current, bool double_repeats_next,
         double validation_bits_error) {
        SyllabusState state;
        state.current = current;
        state.num_tasks = NumTasks(spec);
        state.next_dimension = double_repeats_next ? Dimension::kRepeats : Dimension::kLength;
        const SyllabusState next = Progress(state, validation_bits_error, spec);
        return py::make_tuple(next.current, next.next_dimension == Dimension::kRepeats);
      },
      py::arg("spec"), py::arg("current"), py::arg("double_repeats_next"),
      py::arg("validation_bits_error"),
      "Returns (next task, whether repeats are doubled next).");

  py::class_<RewardHistory>(m, "RewardHistory")
      .def(py::init<size_t, double, double>(), py::arg("window") = 10000,
           py::arg("low_quantile") = 0.2, py::arg("high_quantile") = 0.8)
      .def("record", &RewardHistory::Record)
      .def("scale_and_record", &RewardHistory::ScaleAndRecord)
      .def_property_readonly("low", &RewardHistory::low)
      .def_property_readonly("high", &RewardHistory::high)
      .def("__len__", &RewardHistory::size);

  py::class_<BanditState>(m, "Bandit")
      .def(py::init<int, double, double, RewardHistory>(), py::arg("arms"),
           py::arg("gamma") = 0.3, py::arg("alpha") = 0.0,
           py::arg("history") = RewardHistory{})
      .def_readonly("log_weights", &BanditState::log_weights)
      .def_readwrite("history", &BanditState::history)
      .def("probabilities", &BanditState::Probabilities)
      .def("update", [](BanditState& b, int arm, double reward) { Exp3sUpdate(b, arm, reward); },
           py::arg("arm"), py::arg("scaled_reward"))
      .def(
          "sample",
          [](const BanditState& b, int draws, uint64_t seed) {
            Rng rng = MakeRng(seed, 3);
            std::vector<int> out(draws);
            for (int& t : out) t = Exp3sSample(b, rng);
            return out;
          },
          py::arg("draws"), py::arg("seed"))
      .def(
          "prediction_gain_reward",
          [](BanditState& b, double before, double after, int masked_bits, bool per_bit) {
            return PredictionGainReward(before, after, masked_bits, b,
                                        per_bit ? RewardScale::kPerTargetBit : RewardScale::kNone);
          },
          py::arg("loss_before"), py::arg("loss_after"), py::arg("masked_bits") = 1,
          py::arg("per_target_bit") = true);

  // statistics and reporting
  m.def("quantile", &Quantile, py::arg("values"), py::arg("p"),
        "Linear interpolation between order statistics at p * (n - 1).");
  m.def("median", [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return SortedMedian(v);
  });
  py::class_<BoxStats>(m, "BoxStats")
      .def_readonly("min", &BoxStats::min)
      .def_readonly("q1", &BoxStats::q1)
      .def_readonly("median", &BoxStats::median)
      .def_readonly("q3", &BoxStats::q3)
      .def_readonly("max", &BoxStats::max);
  m.def("box_stats", [](const std::vector<double>& v) { return ComputeBoxStats(v); });

  // harness
  py::enum_<Setting>(m, "Setting").value("TARGET", Setting::kTarget).value("MULTI", Setting::kMulti);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def(py::init([](const py::kwargs& kwargs) {
        ExperimentConfig c;
        std::string text;
        for (const auto& [key, value] : kwargs) {
          text += py::str(key).cast<std::string>() + " = " +
                  py::str(value).cast<std::string>() + "\n";
        }
        ApplyConfigText(c, text);
        return c;
      }))
      .def("set", [](ExperimentConfig& c, const std::string& key, const std::string& value) {
        SetConfigValue(c, key, value);
      })
      .def("apply_text", [](ExperimentConfig& c, const std::string& text) { ApplyConfigText(c, text); })
      .def("to_text", &ExperimentConfig::ToText)
      .def("hash", &ExperimentConfig::Hash)
      .def("validate", &ExperimentConfig::Validate)
      .def_readwrite("problem", &ExperimentConfig::problem)
      .def_readwrite("syllabus", &ExperimentConfig::syllabus);

  py::class_<ValidationRow>(m, "ValidationRow")
      .def_readonly("step", &ValidationRow::step)
      .def_readonly("target_bits_error", &ValidationRow::target_bits_error)
      .def_readonly("multi_bits_error", &ValidationRow::multi_bits_error)
      .def_readonly("current_task", &ValidationRow::current_task)
      .def_readonly("distribution", &ValidationRow::distribution);
  py::class_<TestResult>(m, "TestResult")
      .def_readonly("test_name", &TestResult::test_name)
      .def_readonly("bits_error", &TestResult::bits_error)
      .def_readonly("best_step", &TestResult::best_step);
  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("seed", &RunRecord::seed)
      .def_readonly("problem", &RunRecord::problem)
      .def_readonly("syllabus", &RunRecord::syllabus)
      .def_readonly("config_hash", &RunRecord::config_hash)
      .def_readonly("rows", &RunRecord::rows)
      .def_readonly("tests", &RunRecord::tests)
      .def_readonly("diverged", &RunRecord::diverged)
      .def_readonly("steps_completed", &RunRecord::steps_completed);

  m.def("select_best", &SelectBest, py::arg("record"), py::arg("setting"));
  m.def(
      "train_run",
      [](const ExperimentConfig& config, uint64_t seed,
         std::optional<std::filesystem::path> out_dir) {
        py::gil_scoped_release release;
        return TrainRun(config, seed, out_dir);
      },
      py::arg("config"), py::arg("seed"), py::arg("out_dir") = py::none());
  m.def(
      "run_suite",
      [](const ExperimentConfig& config, int jobs) {
        py::gil_scoped_release release;
        return RunSuite(config, jobs);
      },
      py::arg("config"), py::arg("jobs") = 1);
  m.def("load_run_records", &LoadRunRecords, py::arg("directory"));
  m.def(
      "median_curve",
      [](const std::vector<RunRecord>& records, Setting setting) {
        std::vector<py::tuple> out;
        for (const CurvePoint& p : MedianCurve(records, setting)) {
          out.push_back(py::make_tuple(p.step, p.median, p.q1, p.q3));
        }
        return out;
      },
      py::arg("records"), py::arg("setting"), "List of (step, median, q1, q3).");
  m.def(
      "emit_report",
      [](const std::vector<RunRecord>& records, const std::filesystem::path& out_dir) {
        return EmitReport(records, out_dir);
      },
      py::arg("records"), py::arg("out_dir"));
  m.def("tune_allocator", &TuneAllocatorForTraining);
}
