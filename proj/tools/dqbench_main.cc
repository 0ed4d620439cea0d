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

// dqbench command line: benchmark runs, single episodes, observation dumps,
// grasp-fusion inspection, distillation recording and the nn self-test.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dqbench/benchmark.h"
#include "dqbench/config.h"
#include "dqbench/distill.h"
#include "dqbench/episode.h"
#include "dqbench/errors.h"
#include "dqbench/grasp.h"
#include "dqbench/perception.h"
#include "dqbench/scene.h"
#include "dqbench/seed.h"
#include "reference/nn_reference.h"

namespace dqbench {
namespace {

void write_file(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw FileError("cannot write '" + path + "'");
}

HarnessConfig harness_config(const std::string& path) {
  return path.empty() ? config_from_environment() : load_config(path);
}

void print_episode(const EpisodeLog& log) {
  std::printf("level=%d object=%s seed=%llu outcome=%s attempts=%d "
              "success_step=%s decision_steps=%d\n",
              log.config.level, log.config.object_id.c_str(),
              static_cast<unsigned long long>(log.config.seed),
              std::string(to_string(log.outcome.phase)).c_str(),
              log.outcome.attempt_count,
              log.outcome.success_step
                  ? std::to_string(*log.outcome.success_step).c_str()
                  : "-",
              log.decision_steps());
}

// Latest mask/depth planes of one view from a stacked observation.
Frame frame_from_observation(const nn::Tensor& obs, int view) {
  Frame f = Frame::blank(kImageWidth, kImageHeight);
  const size_t plane = f.pixels();
  const float* mask = obs.ptr() + (view * 6 + kHistoryFrames - 1) * plane;
  const float* depth = obs.ptr() + (view * 6 + 3 + kHistoryFrames - 1) * plane;
  for (size_t i = 0; i < plane; ++i) {
    f.mask[i] = mask[i] > 0.5f;
    f.valid[i] = depth[i] > 0.0f;
    f.depth[i] = static_cast<float>(depth[i] * kDepthClip);
  }
  return f;
}

struct BenchArgs {
  std::vector<int> levels = {1, 2, 3, 4};
  std::optional<int> episodes;
  int steps = 0;
  std::string split = "both";
  uint64_t seed = 0;
  int workers = 0;
  std::string out = "-";
  std::string logs;
};

int run_bench(const HarnessConfig& cfg, const BenchArgs& a) {
  BenchmarkOptions opt;
  opt.levels = a.levels;
  opt.episodes_per_level = a.episodes;
  opt.step_budget = a.steps > 0 ? a.steps : cfg.step_budget;
  opt.split = parse_split_choice(a.split);
  opt.seed = a.seed;
  opt.workers = a.workers > 0 ? a.workers : cfg.workers;
  Environment env = Environment::from_config(cfg);
  BenchmarkResult r = run_benchmark(opt, env);
  write_file(a.out, r.csv());
  if (!a.logs.empty()) write_file(a.logs, r.logs_jsonl());
  return 0;
}

struct EpisodeArgs {
  int level = 1;
  std::string object;
  uint64_t seed = 0;
  std::string dump_log;
};

int run_single(const HarnessConfig& cfg, const EpisodeArgs& a) {
  Environment env = Environment::from_config(cfg);
  EpisodeLog log = run_episode(env.episode(a.level, a.object, a.seed), env);
  print_episode(log);
  if (!a.dump_log.empty()) write_file(a.dump_log, log.to_json() + "\n");
  return 0;
}

struct RenderArgs {
  int level = 1;
  std::string object;
  uint64_t seed = 0;
  int step = 1;
  std::string out_dir = ".";
};

int run_render(const HarnessConfig& cfg, const RenderArgs& a) {
  Environment env = Environment::from_config(cfg);
  std::string object = a.object.empty() ? env.catalog.front().id : a.object;
  std::filesystem::path dir(a.out_dir);
  std::filesystem::create_directories(dir);
  bool written = false;
  EpisodeLog log = run_episode(
      env.episode(a.level, object, a.seed), env,
      [&](const StepObservation& o) {
        if (o.step != a.step) return;
        const char* names[2] = {"wrist", "base"};
        for (int view = 0; view < 2; ++view) {
          Frame f = frame_from_observation(o.observation, view);
          write_mask_pgm(dir / (std::string(names[view]) + "_mask.pgm"), f);
          write_depth_pgm(dir / (std::string(names[view]) + "_depth.pgm"), f);
        }
        written = true;
      });
  if (!written) {
    throw InvalidArgument("episode ended after " +
                          std::to_string(log.decision_steps()) +
                          " steps, before step " + std::to_string(a.step));
  }
  std::printf("wrote wrist/base mask and depth for step %d to %s\n", a.step,
              dir.string().c_str());
  return 0;
}

struct InspectArgs {
  std::string object;
  int level = 1;
  uint64_t seed = 0;
  std::string export_path;
};

int run_inspect(const HarnessConfig& cfg, const InspectArgs& a) {
  Environment env = Environment::from_config(cfg);
  const ObjectGrasps& g = env.grasps.at(find_object(env.catalog, a.object).id);
  SceneState scene = reset_episode(env.episode(a.level, a.object, a.seed),
                                   env.catalog);
  GfmResult r = gfm_forward(g.feature, scene.object_pose, g.bank, env.gfm);
  std::printf("object %s: %zu candidates, bank %d/%d\n", a.object.c_str(),
              g.candidates.size(), g.bank.size(), g.bank.capacity);
  std::printf("%4s %8s %8s %8s %8s %8s %8s %7s %7s\n", "k", "px", "py", "pz",
              "rx", "ry", "rz", "score", "alpha");
  for (int k = 0; k < g.bank.size(); ++k) {
    const Pose6& p = g.bank.candidates[k].pose;
    std::printf("%4d %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %7.4f %7.4f\n", k,
                p.position.x(), p.position.y(), p.position.z(),
                p.orientation.x(), p.orientation.y(), p.orientation.z(),
                g.bank.candidates[k].score, r.alphas[k]);
  }
  std::printf("fused (world) %.4f %.4f %.4f %.4f %.4f %.4f\n",
              r.fused.position.x(), r.fused.position.y(), r.fused.position.z(),
              r.fused.orientation.x(), r.fused.orientation.y(),
              r.fused.orientation.z());
  if (!a.export_path.empty()) write_file(a.export_path, export_bank(g.bank));
  return 0;
}

struct DistillArgs {
  int episodes = 1;
  int level = 1;
  std::string split = "seen";
  uint64_t seed = 0;
  std::string out;
};

int run_distill(const HarnessConfig& cfg, const DistillArgs& a) {
  Environment env = Environment::from_config(cfg);
  std::vector<std::string> pool =
      object_pool(env.catalog, parse_split_choice(a.split));
  DatasetWriter writer(a.out);
  const size_t start = writer.written();
  int successes = 0;
  for (int i = 0; i < a.episodes; ++i) {
    uint64_t s = episode_seed(a.seed, a.level, i);
    const std::string& object = pool[splitmix64(s) % pool.size()];
    successes += record_distillation(env.episode(a.level, object, s), env,
                                     writer, static_cast<uint64_t>(i))
                     .success();
  }
  writer.flush();
  std::printf("%d episodes (%d successful), %zu records appended to %s\n",
              a.episodes, successes, writer.written() - start, a.out.c_str());
  return 0;
}

int run_selftest(int cases, uint64_t seed) {
  bool ok = true;
  for (const reference::SelftestCase& c :
       reference::run_nn_selftest(cases, seed)) {
    std::printf("%-26s %s cases=%d max_err=%.3e tol=%.1e\n", c.op.c_str(),
                c.pass() ? "PASS" : "FAIL", c.cases, c.max_error, c.tolerance);
    ok &= c.pass();
  }
  return ok ? 0 : 1;
}

int run(int argc, char** argv) {
  CLI::App app{"dqbench: mobile grasping benchmark harness"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "harness config file (default: $" +
                     std::string(kConfigEnvVar) + ")");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "run the benchmark and print CSV");
  b->add_option("--levels", bench.levels, "comma-separated levels")
      ->delimiter(',')
      ->check(CLI::Range(1, 4));
  auto* eps = b->add_option("--episodes", bench.episodes,
                            "episodes per level")
                  ->check(CLI::PositiveNumber);
  b->add_option("--steps", bench.steps, "decision-step budget per level")
      ->check(CLI::PositiveNumber)
      ->excludes(eps);
  b->add_option("--split", bench.split, "seen, unseen or both");
  b->add_option("--seed", bench.seed);
  b->add_option("--workers", bench.workers)->check(CLI::PositiveNumber);
  b->add_option("--out", bench.out, "CSV path, - for stdout");
  b->add_option("--logs", bench.logs, "JSONL episode log path");

  EpisodeArgs episode;
  auto* e = app.add_subcommand("episode", "run one episode");
  e->add_option("--level", episode.level)->check(CLI::Range(1, 4));
  e->add_option("--object", episode.object)->required();
  e->add_option("--seed", episode.seed);
  e->add_option("--dump-log", episode.dump_log, "JSON log path, - for stdout");

  RenderArgs render;
  auto* r = app.add_subcommand("render", "dump the observation at one step");
  r->add_option("--level", render.level)->check(CLI::Range(1, 4));
  r->add_option("--object", render.object);
  r->add_option("--seed", render.seed);
  r->add_option("--step", render.step)->check(CLI::PositiveNumber);
  r->add_option("--out-dir", render.out_dir);

  InspectArgs inspect;
  auto* g = app.add_subcommand("gfm-inspect",
                               "print an object's bank and attention");
  g->add_option("--object", inspect.object)->required();
  g->add_option("--level", inspect.level)->check(CLI::Range(1, 4));
  g->add_option("--seed", inspect.seed);
  g->add_option("--export", inspect.export_path, "write the bank as text");

  DistillArgs distill;
  auto* d = app.add_subcommand("distill-record",
                               "append teacher rollouts to a dataset");
  d->add_option("--episodes", distill.episodes)->check(CLI::PositiveNumber);
  d->add_option("--level", distill.level)->check(CLI::Range(1, 4));
  d->add_option("--split", distill.split);
  d->add_option("--seed", distill.seed);
  d->add_option("--out", distill.out)->required();

  int selftest_cases = 20;
  uint64_t selftest_seed = 1;
  auto* n = app.add_subcommand("nn-selftest",
                               "compare nn ops with naive references");
  n->add_option("--cases", selftest_cases)->check(CLI::PositiveNumber);
  n->add_option("--seed", selftest_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    std::fprintf(stderr, "error: usage: %s\n", err.what());
    return 2;
  }

  if (n->parsed()) return run_selftest(selftest_cases, selftest_seed);
  const HarnessConfig cfg = harness_config(config_path);
  if (b->parsed()) return run_bench(cfg, bench);
  if (e->parsed()) return run_single(cfg, episode);
  if (r->parsed()) return run_render(cfg, render);
  if (g->parsed()) return run_inspect(cfg, inspect);
  return run_distill(cfg, distill);
}

}  // namespace
}  // namespace dqbench

int main(int argc, char** argv) {
  try {
    return dqbench::run(argc, argv);
  } catch (const dqbench::Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.code().c_str(), e.what());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
  }
  return 1;
}
