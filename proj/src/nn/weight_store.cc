// Copyright 2026 The dqbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dqbench/nn/weight_store.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "dqbench/errors.h"

namespace dqbench::nn {

namespace {

constexpr const char* kMagic = "dqbench-weights";
constexpr int kVersion = 1;

uint32_t to_little(uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    return (v >> 24) | ((v >> 8) & 0xff00u) | ((v << 8) & 0xff0000u) |
           (v << 24);
  }
  return v;
}

}  // namespace

size_t Manifest::parameter_count() const {
  size_t n = 0;
  for (const auto& p : params) n += shape_size(p.shape);
  return n;
}

WeightStore WeightStore::random(const Manifest& manifest, uint64_t seed) {
  WeightStore store;
  store.manifest_ = manifest;
  std::mt19937_64 rng(seed);
  for (const auto& p : manifest.params) {
    Tensor t(p.shape);
    switch (p.init) {
      case Init::kOnes:
        std::fill(t.data().begin(), t.data().end(), 1.0f);
        break;
      case Init::kZeros:
        break;
      case Init::kUniformFanIn: {
        const float bound = 1.0f / std::sqrt(static_cast<float>(p.fan_in));
        std::uniform_real_distribution<float> u(-bound, bound);
        for (float& v : t.data()) v = u(rng);
        break;
      }
    }
    store.tensors_.emplace(p.name, std::move(t));
  }
  return store;
}

void WeightStore::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot open '" + path + "' for writing");
  out << kMagic << ' ' << kVersion << '\n'
      << "architecture " << manifest_.architecture << '\n'
      << "params " << manifest_.params.size() << '\n';
  for (const auto& p : manifest_.params) {
    out << "param " << p.name;
    for (int d : p.shape) out << ' ' << d;
    out << '\n';
  }
  out << "end\n";
  for (const auto& p : manifest_.params) {
    for (float v : tensors_.at(p.name).data()) {
      uint32_t bits = to_little(std::bit_cast<uint32_t>(v));
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!out) throw FileError("write to '" + path + "' failed");
}

WeightStore WeightStore::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path + "'");
  auto fail = [&](const std::string& why) -> FileError {
    return FileError("'" + path + "': " + why);
  };

  WeightStore store;
  std::string line;
  std::string word;
  int version = 0;
  if (!std::getline(in, line)) throw fail("empty file");
  {
    std::istringstream ls(line);
    if (!(ls >> word >> version) || word != kMagic || version != kVersion) {
      throw fail("bad header line '" + line + "'");
    }
  }
  size_t count = 0;
  if (!std::getline(in, line) ||
      !(std::istringstream(line) >> word >> store.manifest_.architecture) ||
      word != "architecture") {
    throw fail("missing architecture line");
  }
  if (!std::getline(in, line) ||
      !(std::istringstream(line) >> word >> count) || word != "params") {
    throw fail("missing params line");
  }
  for (size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw fail("truncated manifest");
    std::istringstream ls(line);
    ParamSpec spec;
    if (!(ls >> word >> spec.name) || word != "param") {
      throw fail("bad manifest line '" + line + "'");
    }
    int d = 0;
    while (ls >> d) spec.shape.push_back(d);
    if (spec.shape.empty()) throw fail("parameter '" + spec.name + "' has no shape");
    try {
      shape_size(spec.shape);
    } catch (const ShapeError& e) {
      throw fail(e.what());
    }
    store.manifest_.params.push_back(std::move(spec));
  }
  if (!std::getline(in, line) || line != "end") throw fail("missing end line");

  for (const auto& p : store.manifest_.params) {
    Tensor t(p.shape);
    for (float& v : t.data()) {
      uint32_t bits = 0;
      if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
        throw fail("truncated data for '" + p.name + "'");
      }
      v = std::bit_cast<float>(to_little(bits));
    }
    store.tensors_.emplace(p.name, std::move(t));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw fail("trailing bytes after parameter data");
  }
  return store;
}

void WeightStore::validate(const Manifest& expected) const {
  if (manifest_.architecture != expected.architecture) {
    throw ArchitectureError("architecture '" + manifest_.architecture +
                            "' does not match expected '" +
                            expected.architecture + "'");
  }
  for (const auto& p : expected.params) get(p.name, p.shape);
}

const Tensor& WeightStore::get(const std::string& name,
                               const Shape& shape) const {
  const Tensor& t = get(name);
  if (t.shape() != shape) {
    throw ArchitectureError("parameter '" + name + "' has shape " +
                            shape_string(t.shape()) + ", expected " +
                            shape_string(shape));
  }
  return t;
}

const Tensor& WeightStore::get(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) {
    throw ArchitectureError("missing parameter '" + name + "'");
  }
  return it->second;
}

void WeightStore::set(const std::string& name, Tensor value) {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) {
    throw ArchitectureError("missing parameter '" + name + "'");
  }
  if (it->second.shape() != value.shape()) {
    throw ArchitectureError("parameter '" + name + "' has shape " +
                            shape_string(it->second.shape()) + ", got " +
                            shape_string(value.shape()));
  }
  it->second = std::move(value);
}

}  // namespace dqbench::nn
