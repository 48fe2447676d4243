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

#include "curriculum/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace curriculum {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value) {
  throw std::invalid_argument("bad value '" + std::string(value) + "' for key '" +
                              std::string(key) + "'");
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) BadValue(key, value);
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  BadValue(key, value);
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

uint64_t Fnv1a(std::string_view text) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::vector<std::pair<std::string, std::string>> Entries(const ExperimentConfig& c) {
  const SyllabusConfig& s = c.syllabus;
  return {
      {"problem", std::string(ProblemName(c.problem.problem))},
      {"vector_dim", std::to_string(c.problem.vector_dim)},
      {"max_length", std::to_string(c.problem.max_length)},
      {"max_repeats", std::to_string(c.problem.max_repeats)},
      {"success_threshold", FormatDouble(c.problem.success_threshold)},
      {"syllabus", std::string(SyllabusName(s.kind))},
      {"lookback_frac", FormatDouble(s.lookback_frac)},
      {"lbf_frac", FormatDouble(s.lbf_frac)},
      {"bandit_gamma", FormatDouble(s.bandit_gamma)},
      {"bandit_alpha", FormatDouble(s.bandit_alpha)},
      {"reward_window", std::to_string(s.reward_window)},
      {"reward_quantiles",
       FormatDouble(s.reward_quantile_low) + "," + FormatDouble(s.reward_quantile_high)},
      {"reward_scale", s.reward_scale == RewardScale::kNone ? "none" : "per-target-bit"},
      {"layers", std::to_string(c.layers)},
      {"hidden", std::to_string(c.hidden)},
      {"lr", FormatDouble(c.adam.lr)},
      {"beta1", FormatDouble(c.adam.beta1)},
      {"beta2", FormatDouble(c.adam.beta2)},
      {"epsilon", FormatDouble(c.adam.epsilon)},
      {"clip_norm", FormatDouble(c.clip_norm)},
      {"batch", std::to_string(c.batch_size)},
      {"steps", std::to_string(c.total_steps)},
      {"val_every", std::to_string(c.val_every)},
      {"val_target_size", std::to_string(c.val_target_size)},
      {"val_multi_size", std::to_string(c.val_multi_size)},
      {"test_size", std::to_string(c.test_size)},
      {"probe_size", std::to_string(c.probe_size)},
      {"eval_seed", std::to_string(c.eval_seed)},
      {"divergence_loss", FormatDouble(c.divergence_loss)},
      {"stop_on_target", c.stop_on_target ? "true" : "false"},
      {"seeds", std::to_string(c.seeds)},
      {"first_seed", std::to_string(c.first_seed)},
      {"out", c.out_dir},
  };
}

}  // namespace

LstmShape ExperimentConfig::model_shape() const {
  return {problem.input_dim(), hidden, layers, problem.target_dim()};
}

void ExperimentConfig::Validate() const {
  problem.Validate();
  syllabus.Validate();
  model_shape().Validate();
  if (!(adam.lr > 0.0)) throw std::invalid_argument("lr must be positive");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw std::invalid_argument("Adam betas must be in [0, 1)");
  }
  if (!(adam.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(clip_norm > 0.0)) throw std::invalid_argument("clip_norm must be positive");
  if (batch_size < 1 || total_steps < 1 || val_every < 1 || val_target_size < 1 ||
      val_multi_size < 1 || test_size < 1 || probe_size < 1 || seeds < 1) {
    throw std::invalid_argument("counts must be positive");
  }
  if (val_every > total_steps) throw std::invalid_argument("val_every exceeds steps");
  if (!(divergence_loss > 0.0)) throw std::invalid_argument("divergence_loss must be positive");
}

std::string ExperimentConfig::ToText() const {
  std::string text;
  for (const auto& [key, value] : Entries(*this)) text += key + " = " + value + "\n";
  return text;
}

uint64_t ExperimentConfig::Hash() const {
  std::string text;
  for (const auto& [key, value] : Entries(*this)) {
    if (key == "out" || key == "seeds" || key == "first_seed") continue;
    text += key + "=" + value + ";";
  }
  return Fnv1a(text);
}

void SetConfigValue(ExperimentConfig& c, std::string_view key, std::string_view raw) {
  const std::string_view value = Trim(raw);
  SyllabusConfig& s = c.syllabus;
  if (key == "problem") {
    c.problem = ProblemSpec::Default(ParseProblem(value));
  } else if (key == "vector_dim") {
    c.problem.vector_dim = ParseNumber<int>(key, value);
  } else if (key == "max_length") {
    c.problem.max_length = ParseNumber<int>(key, value);
  } else if (key == "max_repeats") {
    c.problem.max_repeats = ParseNumber<int>(key, value);
  } else if (key == "success_threshold") {
    c.problem.success_threshold = ParseNumber<double>(key, value);
  } else if (key == "syllabus") {
    s.kind = ParseSyllabus(value);
  } else if (key == "lookback_frac") {
    s.lookback_frac = ParseNumber<double>(key, value);
  } else if (key == "lbf_frac") {
    s.lbf_frac = ParseNumber<double>(key, value);
  } else if (key == "bandit_gamma") {
    s.bandit_gamma = ParseNumber<double>(key, value);
  } else if (key == "bandit_alpha") {
    s.bandit_alpha = ParseNumber<double>(key, value);
  } else if (key == "reward_window") {
    s.reward_window = ParseNumber<int>(key, value);
  } else if (key == "reward_quantiles") {
    const auto comma = value.find(',');
    if (comma == std::string_view::npos) BadValue(key, value);
    s.reward_quantile_low = ParseNumber<double>(key, Trim(value.substr(0, comma)));
    s.reward_quantile_high = ParseNumber<double>(key, Trim(value.substr(comma + 1)));
  } else if (key == "reward_scale") {
    if (value == "none") {
      s.reward_scale = RewardScale::kNone;
    } else if (value == "per-target-bit") {
      s.reward_scale = RewardScale::kPerTargetBit;
    } else {
      BadValue(key, value);
    }
  } else if (key == "layers") {
    c.layers = ParseNumber<int>(key, value);
  } else if (key == "hidden") {
    c.hidden = ParseNumber<int>(key, value);
  } else if (key == "lr") {
    c.adam.lr = ParseNumber<double>(key, value);
  } else if (key == "beta1") {
    c.adam.beta1 = ParseNumber<double>(key, value);
  } else if (key == "beta2") {
    c.adam.beta2 = ParseNumber<double>(key, value);
  } else if (key == "epsilon") {
    c.adam.epsilon = ParseNumber<double>(key, value);
  } else if (key == "clip_norm") {
    c.clip_norm = ParseNumber<double>(key, value);
  } else if (key == "batch") {
    c.batch_size = ParseNumber<int>(key, value);
  } else if (key == "steps") {
    c.total_steps = ParseNumber<long>(key, value);
  } else if (key == "val_every") {
    c.val_every = ParseNumber<int>(key, value);
  } else if (key == "val_target_size") {
    c.val_target_size = ParseNumber<int>(key, value);
  } else if (key == "val_multi_size") {
    c.val_multi_size = ParseNumber<int>(key, value);
  } else if (key == "test_size") {
    c.test_size = ParseNumber<int>(key, value);
  } else if (key == "probe_size") {
    c.probe_size = ParseNumber<int>(key, value);
  } else if (key == "seeds") {
    c.seeds = ParseNumber<int>(key, value);
  } else if (key == "first_seed") {
    c.first_seed = ParseNumber<uint64_t>(key, value);
  } else if (key == "eval_seed") {
    c.eval_seed = ParseNumber<uint64_t>(key, value);
  } else if (key == "divergence_loss") {
    c.divergence_loss = ParseNumber<double>(key, value);
  } else if (key == "stop_on_target") {
    c.stop_on_target = ParseBool(key, value);
  } else if (key == "out") {
    c.out_dir = std::string(value);
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

void ApplyConfigText(ExperimentConfig& config, std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = Trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_number) +
                                  ": expected 'key = value'");
    }
    entries.emplace_back(Trim(view.substr(0, eq)), Trim(view.substr(eq + 1)));
  }
  for (const auto& [key, value] : entries) {
    if (key == "problem") SetConfigValue(config, key, value);
  }
  for (const auto& [key, value] : entries) {
    if (key != "problem") SetConfigValue(config, key, value);
  }
}

void ApplyConfigFile(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  ApplyConfigText(config, buffer.str());
}

std::string HashToHex(uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace curriculum
