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

#include "dqbench/config.h"

#include <cstdlib>
#include <functional>
#include <sstream>
#include <vector>

#include "dqbench/errors.h"
#include "dqbench/kv_text.h"

namespace dqbench {

namespace {

struct Field {
  const char* key;
  std::function<void(HarnessConfig&, std::string_view)> set;
  std::function<std::string(const HarnessConfig&)> get;
};

std::string num(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

bool parse_bool(std::string_view s, std::string_view what) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw InvalidArgument(std::string(what) + ": expected true or false, got '" +
                        std::string(s) + "'");
}

#define DQ_DOUBLE(name, member)                                              \
  Field {                                                                    \
    name, [](HarnessConfig& c, std::string_view v) {                         \
      c.member = parse_double(v, name);                                      \
    },                                                                       \
        [](const HarnessConfig& c) { return num(c.member); }                 \
  }
#define DQ_INT(name, member)                                                 \
  Field {                                                                    \
    name, [](HarnessConfig& c, std::string_view v) {                         \
      c.member = static_cast<int>(parse_int(v, name));                       \
    },                                                                       \
        [](const HarnessConfig& c) { return std::to_string(c.member); }      \
  }
#define DQ_BOOL(name, member)                                                \
  Field {                                                                    \
    name, [](HarnessConfig& c, std::string_view v) {                         \
      c.member = parse_bool(v, name);                                        \
    },                                                                       \
        [](const HarnessConfig& c) {                                         \
          return std::string(c.member ? "true" : "false");                   \
        }                                                                    \
  }
#define DQ_STRING(name, member)                                              \
  Field {                                                                    \
    name, [](HarnessConfig& c, std::string_view v) { c.member = v; },        \
        [](const HarnessConfig& c) { return c.member; }                      \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      DQ_DOUBLE("physics_dt", physics_dt),
      DQ_DOUBLE("decision_dt", decision_dt),
      DQ_INT("timeout_steps", timeout_steps),
      DQ_DOUBLE("teacher.standoff", teacher.standoff),
      DQ_DOUBLE("teacher.align_pos_tol", teacher.align_pos_tol),
      DQ_DOUBLE("teacher.align_ori_tol", teacher.align_ori_tol),
      DQ_DOUBLE("teacher.max_rel_speed_at_close",
                teacher.max_rel_speed_at_close),
      DQ_DOUBLE("teacher.intercept_horizon", teacher.intercept_horizon),
      DQ_BOOL("teacher.use_gfm", teacher.use_gfm),
      DQ_DOUBLE("camera.hfov_deg", camera_hfov_deg),
      DQ_DOUBLE("camera.base_pitch_deg", base_camera_pitch_deg),
      DQ_DOUBLE("camera.mask_flip_prob", mask_flip_prob),
      DQ_BOOL("render", render),
      DQ_INT("grasp.candidate_count", candidate_count),
      DQ_INT("grasp.bank_size", bank_size),
      DQ_STRING("gfm.weights", gfm_weights),
      DQ_STRING("catalog", catalog),
      DQ_INT("bench.step_budget", step_budget),
      DQ_INT("bench.workers", workers),
  };
  return table;
}

#undef DQ_DOUBLE
#undef DQ_INT
#undef DQ_BOOL
#undef DQ_STRING

void require(bool ok, const std::string& key, const std::string& rule) {
  if (!ok) throw InvalidConfig(key + " " + rule);
}

}  // namespace

void HarnessConfig::validate() const {
  require(physics_dt > 0.0, "physics_dt", "must be > 0");
  require(decision_dt > 0.0, "decision_dt", "must be > 0");
  double ratio = decision_dt / physics_dt;
  require(std::abs(ratio - std::round(ratio)) < 1e-9, "decision_dt",
          "must be an integer multiple of physics_dt");
  require(timeout_steps >= 1, "timeout_steps", "must be >= 1");
  require(camera_hfov_deg > 0.0 && camera_hfov_deg < 180.0, "camera.hfov_deg",
          "must lie in (0, 180)");
  require(mask_flip_prob >= 0.0 && mask_flip_prob <= 1.0,
          "camera.mask_flip_prob", "must lie in [0, 1]");
  require(candidate_count >= 1, "grasp.candidate_count", "must be >= 1");
  require(bank_size >= 1, "grasp.bank_size", "must be >= 1");
  require(step_budget >= 1, "bench.step_budget", "must be >= 1");
  require(workers >= 1, "bench.workers", "must be >= 1");
  teacher.validate();
}

HarnessConfig parse_config(std::string_view text, const HarnessConfig& base) {
  HarnessConfig cfg = base;
  for (const KvEntry& e : parse_kv_lines(text)) {
    const Field* field = nullptr;
    for (const Field& f : fields()) {
      if (e.key == f.key) field = &f;
    }
    if (!field) {
      throw InvalidConfig("line " + std::to_string(e.line) +
                          ": unknown key '" + e.key + "'");
    }
    try {
      field->set(cfg, e.value);
    } catch (const InvalidArgument& err) {
      throw InvalidConfig("line " + std::to_string(e.line) + ": " +
                          err.what());
    }
  }
  cfg.teacher.decision_dt = cfg.decision_dt;
  cfg.validate();
  return cfg;
}

HarnessConfig load_config(const std::string& path, const HarnessConfig& base) {
  try {
    return parse_config(read_text_file(path), base);
  } catch (const InvalidConfig& e) {
    throw InvalidConfig(path + ": " + e.what());
  }
}

HarnessConfig config_from_environment() {
  const char* path = std::getenv(kConfigEnvVar);
  if (path == nullptr || *path == '\0') return {};
  return load_config(path);
}

std::string format_config(const HarnessConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) {
    out += std::string(f.key) + " = " + f.get(cfg) + "\n";
  }
  return out;
}

}  // namespace dqbench
