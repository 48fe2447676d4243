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

#include "curriculum/checkpoint.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace curriculum {
namespace {

constexpr char kMagic[8] = {'C', 'L', 'C', 'K', 'P', 'T', '0', '1'};
constexpr uint32_t kByteOrderMarker = 0x01020304;

static_assert(std::endian::native == std::endian::little,
              "checkpoint integers are written in host order; big-endian hosts unsupported");

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  }
  template <typename T>
  void Put(const T& value) {
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }
  void PutBytes(const void* data, size_t size) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  }
  void PutArray(const std::string& name, int rows, int cols, const double* data) {
    Put(static_cast<uint32_t>(name.size()));
    PutBytes(name.data(), name.size());
    Put(static_cast<uint32_t>(2));
    Put(static_cast<uint64_t>(rows));
    Put(static_cast<uint64_t>(cols));
    PutBytes(data, sizeof(double) * static_cast<size_t>(rows) * cols);
  }
  void Finish(const std::filesystem::path& path) {
    out_.flush();
    if (!out_) throw std::runtime_error("failed writing checkpoint: " + path.string());
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) throw std::runtime_error("cannot open checkpoint: " + path.string());
  }
  template <typename T>
  T Get() {
    T value{};
    GetBytes(&value, sizeof(T));
    return value;
  }
  void GetBytes(void* data, size_t size) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (!in_) throw StructuralError("truncated checkpoint");
  }
  // Reads one named array into `dest`, checking name and dimensions.
  void GetArray(const std::string& name, int rows, int cols, double* dest) {
    const auto name_size = Get<uint32_t>();
    if (name_size > 256) throw StructuralError("bad array name length in checkpoint");
    std::string found(name_size, '\0');
    GetBytes(found.data(), name_size);
    if (found != name) {
      throw StructuralError("checkpoint array '" + found + "' where '" + name + "' expected");
    }
    if (Get<uint32_t>() != 2) throw StructuralError("checkpoint array rank must be 2");
    const auto r = Get<uint64_t>();
    const auto c = Get<uint64_t>();
    if (r != static_cast<uint64_t>(rows) || c != static_cast<uint64_t>(cols)) {
      throw StructuralError("checkpoint array '" + name + "' has unexpected dimensions");
    }
    GetBytes(dest, sizeof(double) * static_cast<size_t>(rows) * cols);
  }
  bool AtEnd() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::ifstream in_;
};

void PutParams(Writer& writer, const std::string& prefix, const NetParams& params) {
  const auto values = params.values();
  for (const auto& block : params.Blocks()) {
    writer.PutArray(prefix + block.name, block.rows, block.cols, values.data() + block.offset);
  }
}

void GetParams(Reader& reader, const std::string& prefix, NetParams& params) {
  auto values = params.values();
  for (const auto& block : params.Blocks()) {
    reader.GetArray(prefix + block.name, block.rows, block.cols, values.data() + block.offset);
  }
}

}  // namespace

void SaveCheckpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  const LstmShape& shape = checkpoint.params.shape();
  if (checkpoint.adam.m.shape() != shape || checkpoint.adam.v.shape() != shape) {
    throw StructuralError("checkpoint optimizer state does not match parameters");
  }
  Writer writer(path);
  writer.PutBytes(kMagic, sizeof(kMagic));
  writer.Put(kByteOrderMarker);
  writer.Put(checkpoint.config_hash);
  writer.Put(checkpoint.step);
  writer.Put(checkpoint.adam.step);
  for (int dim : {shape.input_dim, shape.hidden, shape.layers, shape.output_dim}) {
    writer.Put(static_cast<uint32_t>(dim));
  }
  const size_t blocks = checkpoint.params.Blocks().size();
  writer.Put(static_cast<uint32_t>(3 * blocks + 1));
  PutParams(writer, "", checkpoint.params);
  PutParams(writer, "m/", checkpoint.adam.m);
  PutParams(writer, "v/", checkpoint.adam.v);
  const AdamConfig& cfg = checkpoint.adam.config;
  const double hyper[4] = {cfg.lr, cfg.beta1, cfg.beta2, cfg.epsilon};
  writer.PutArray("adam", 4, 1, hyper);
  writer.Finish(path);
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  Reader reader(path);
  char magic[sizeof(kMagic)];
  reader.GetBytes(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw StructuralError("not a checkpoint file: " + path.string());
  }
  if (reader.Get<uint32_t>() != kByteOrderMarker) {
    throw StructuralError("checkpoint byte order differs from this host");
  }
  Checkpoint checkpoint;
  checkpoint.config_hash = reader.Get<uint64_t>();
  checkpoint.step = reader.Get<int64_t>();
  const auto adam_step = reader.Get<int64_t>();
  LstmShape shape;
  shape.input_dim = static_cast<int>(reader.Get<uint32_t>());
  shape.hidden = static_cast<int>(reader.Get<uint32_t>());
  shape.layers = static_cast<int>(reader.Get<uint32_t>());
  shape.output_dim = static_cast<int>(reader.Get<uint32_t>());
  try {
    shape.Validate();
  } catch (const std::invalid_argument& e) {
    throw StructuralError(std::string("checkpoint shape: ") + e.what());
  }
  checkpoint.params = NetParams(shape);
  checkpoint.adam = AdamState(shape, AdamConfig{});
  checkpoint.adam.step = adam_step;
  const size_t blocks = checkpoint.params.Blocks().size();
  if (reader.Get<uint32_t>() != 3 * blocks + 1) {
    throw StructuralError("checkpoint array count does not match its shape");
  }
  GetParams(reader, "", checkpoint.params);
  GetParams(reader, "m/", checkpoint.adam.m);
  GetParams(reader, "v/", checkpoint.adam.v);
  double hyper[4];
  reader.GetArray("adam", 4, 1, hyper);
  checkpoint.adam.config = {hyper[0], hyper[1], hyper[2], hyper[3]};
  if (!reader.AtEnd()) throw StructuralError("trailing bytes in checkpoint");
  return checkpoint;
}

}  // namespace curriculum
