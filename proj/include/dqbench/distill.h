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

// Append-only dataset of (observation, teacher action) pairs.
//
// Layout, little-endian:
//   header (32 bytes): "DQDSET01", u32 version, u32 channels, u32 height,
//                      u32 width, u32 proprio size, u32 action size
//   record: u64 episode id, u32 step, u32 gripper bit, f32 observation
//           [12*54*96], f32 proprio [21], f32 action [8]

#ifndef DQBENCH_DISTILL_H_
#define DQBENCH_DISTILL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "dqbench/episode.h"
#include "dqbench/nn/tensor.h"

namespace dqbench {

inline constexpr char kDatasetMagic[9] = "DQDSET01";
inline constexpr uint32_t kDatasetVersion = 1;
inline constexpr size_t kDatasetHeaderSize = 32;

struct DistillRecord {
  uint64_t episode_id = 0;
  uint32_t step = 0;
  bool gripper_close = false;
  nn::Tensor observation;
  std::vector<float> proprio;
  std::array<float, 8> action{};

  bool operator==(const DistillRecord&) const = default;
};

size_t distill_record_size();

class DatasetWriter {
 public:
  // Creates the file with a header, or appends to an existing dataset
  // after checking its header. Throws FileError naming the path.
  explicit DatasetWriter(std::filesystem::path path);

  DatasetWriter(const DatasetWriter&) = delete;
  DatasetWriter& operator=(const DatasetWriter&) = delete;

  // Throws ShapeError for a malformed record and FileError on I/O failure.
  void append(const DistillRecord& record);
  void flush();

  size_t written() const { return written_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  size_t written_ = 0;
};

// Throws FileError on a bad header, truncated record or trailing bytes.
std::vector<DistillRecord> read_dataset(const std::filesystem::path& path);

// Runs the episode and appends one record per decision step.
EpisodeLog record_distillation(const EpisodeConfig& config,
                               const Environment& env, DatasetWriter& writer,
                               uint64_t episode_id);

}  // namespace dqbench

#endif  // DQBENCH_DISTILL_H_
