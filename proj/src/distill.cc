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

#include "dqbench/distill.h"

#include <bit>
#include <cstring>
#include <string>

#include "dqbench/errors.h"
#include "dqbench/perception.h"

namespace dqbench {

namespace {

constexpr size_t kObservationFloats =
    static_cast<size_t>(kObservationChannels) * kImageHeight * kImageWidth;
constexpr uint32_t kActionSize = 8;

void put_u32(std::string& buf, uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string& buf, float f) { put_u32(buf, std::bit_cast<uint32_t>(f)); }

uint32_t get_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint64_t get_u64(const unsigned char* p) {
  return static_cast<uint64_t>(get_u32(p)) |
         static_cast<uint64_t>(get_u32(p + 4)) << 32;
}

float get_f32(const unsigned char* p) { return std::bit_cast<float>(get_u32(p)); }

std::string header_bytes() {
  std::string h(kDatasetMagic, 8);
  put_u32(h, kDatasetVersion);
  put_u32(h, kObservationChannels);
  put_u32(h, kImageHeight);
  put_u32(h, kImageWidth);
  put_u32(h, kProprioSize);
  put_u32(h, kActionSize);
  return h;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open dataset '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

size_t distill_record_size() {
  return 8 + 4 + 4 + 4 * (kObservationFloats + kProprioSize + kActionSize);
}

DatasetWriter::DatasetWriter(std::filesystem::path path)
    : path_(std::move(path)) {
  std::error_code ec;
  bool exists = std::filesystem::exists(path_, ec) &&
                std::filesystem::file_size(path_, ec) > 0;
  if (exists) {
    std::string data = read_all(path_);
    if (data.size() < kDatasetHeaderSize ||
        data.compare(0, kDatasetHeaderSize, header_bytes()) != 0) {
      throw FileError("'" + path_.string() + "' is not a dataset file");
    }
    size_t body = data.size() - kDatasetHeaderSize;
    if (body % distill_record_size() != 0) {
      throw FileError("'" + path_.string() + "' ends in a partial record");
    }
    written_ = body / distill_record_size();
    out_.open(path_, std::ios::binary | std::ios::app);
  } else {
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (out_) {
      std::string h = header_bytes();
      out_.write(h.data(), static_cast<std::streamsize>(h.size()));
    }
  }
  if (!out_) throw FileError("cannot open '" + path_.string() + "' for writing");
}

void DatasetWriter::append(const DistillRecord& r) {
  if (r.observation.shape() !=
      nn::Shape{kObservationChannels, kImageHeight, kImageWidth}) {
    throw ShapeError("dataset record: observation is " +
                     nn::shape_string(r.observation.shape()) +
                     ", expected [12, 54, 96]");
  }
  if (r.proprio.size() != static_cast<size_t>(kProprioSize)) {
    throw ShapeError("dataset record: proprio has " +
                     std::to_string(r.proprio.size()) + " entries, expected " +
                     std::to_string(kProprioSize));
  }
  std::string buf;
  buf.reserve(distill_record_size());
  put_u64(buf, r.episode_id);
  put_u32(buf, r.step);
  put_u32(buf, r.gripper_close ? 1u : 0u);
  for (float f : r.observation.data()) put_f32(buf, f);
  for (float f : r.proprio) put_f32(buf, f);
  for (float f : r.action) put_f32(buf, f);
  out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out_) throw FileError("write failed for '" + path_.string() + "'");
  ++written_;
}

void DatasetWriter::flush() {
  out_.flush();
  if (!out_) throw FileError("flush failed for '" + path_.string() + "'");
}

std::vector<DistillRecord> read_dataset(const std::filesystem::path& path) {
  std::string data = read_all(path);
  if (data.size() < kDatasetHeaderSize ||
      data.compare(0, kDatasetHeaderSize, header_bytes()) != 0) {
    throw FileError("'" + path.string() + "' has no valid dataset header");
  }
  const size_t rec = distill_record_size();
  size_t body = data.size() - kDatasetHeaderSize;
  if (body % rec != 0) {
    throw FileError("'" + path.string() + "' ends in a partial record");
  }
  std::vector<DistillRecord> out;
  out.reserve(body / rec);
  const auto* p =
      reinterpret_cast<const unsigned char*>(data.data()) + kDatasetHeaderSize;
  for (size_t n = 0; n < body / rec; ++n) {
    DistillRecord r;
    r.episode_id = get_u64(p);
    r.step = get_u32(p + 8);
    r.gripper_close = get_u32(p + 12) != 0;
    p += 16;
    std::vector<float> obs(kObservationFloats);
    for (float& f : obs) {
      f = get_f32(p);
      p += 4;
    }
    r.observation = nn::Tensor({kObservationChannels, kImageHeight, kImageWidth},
                               std::move(obs));
    r.proprio.resize(kProprioSize);
    for (float& f : r.proprio) {
      f = get_f32(p);
      p += 4;
    }
    for (float& f : r.action) {
      f = get_f32(p);
      p += 4;
    }
    out.push_back(std::move(r));
  }
  return out;
}

EpisodeLog record_distillation(const EpisodeConfig& config,
                               const Environment& env, DatasetWriter& writer,
                               uint64_t episode_id) {
  auto observer = [&](const StepObservation& s) {
    DistillRecord r;
    r.episode_id = episode_id;
    r.step = static_cast<uint32_t>(s.step);
    r.gripper_close = s.action.gripper_close;
    r.observation = s.observation;
    r.proprio.assign(s.proprio.begin(), s.proprio.end());
    Vec8 a = s.action.as_vector();
    for (int i = 0; i < 8; ++i) r.action[i] = static_cast<float>(a[i]);
    writer.append(r);
  };
  EpisodeLog log = run_episode(config, env, observer);
  writer.flush();
  return log;
}

}  // namespace dqbench
