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

#include "dqbench/benchmark.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <thread>

#include "dqbench/errors.h"
#include "dqbench/seed.h"

namespace dqbench {

namespace {

constexpr int kBudgetBatch = 16;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fixed(const std::optional<double>& v) {
  return v ? fixed(*v) : std::string();
}

// Runs configs[i] for i in [begin, end) on `workers` threads. Results land
// at their index so scheduling never changes the output.
void run_range(const std::vector<EpisodeConfig>& configs, size_t begin,
               size_t end, const Environment& env, int workers,
               std::vector<EpisodeLog>& out) {
  std::vector<std::exception_ptr> errors(end - begin);
  std::atomic<size_t> next{begin};
  auto work = [&] {
    for (size_t i = next++; i < end; i = next++) {
      try {
        out[i] = run_episode(configs[i], env);
      } catch (...) {
        errors[i - begin] = std::current_exception();
      }
    }
  };
  int n = std::max(1, std::min<int>(workers, static_cast<int>(end - begin)));
  if (n == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::string_view to_string(SplitChoice s) {
  switch (s) {
    case SplitChoice::kSeen: return "seen";
    case SplitChoice::kUnseen: return "unseen";
    case SplitChoice::kBoth: return "both";
  }
  return "?";
}

SplitChoice parse_split_choice(std::string_view s) {
  if (s == "seen") return SplitChoice::kSeen;
  if (s == "unseen") return SplitChoice::kUnseen;
  if (s == "both") return SplitChoice::kBoth;
  throw InvalidArgument("split must be seen, unseen or both, got '" +
                        std::string(s) + "'");
}

uint64_t episode_seed(uint64_t bench_seed, int level, int index) {
  return splitmix64(splitmix64(bench_seed) ^
                    (static_cast<uint64_t>(level) << 32) ^
                    static_cast<uint64_t>(index));
}

std::vector<std::string> object_pool(const std::vector<ObjectSpec>& catalog,
                                     SplitChoice split) {
  std::vector<std::string> pool;
  for (const ObjectSpec& spec : catalog) {
    bool keep = split == SplitChoice::kBoth ||
                (split == SplitChoice::kSeen) == (spec.split == Split::kSeen);
    if (keep) pool.push_back(spec.id);
  }
  if (pool.empty()) {
    throw InvalidArgument("no catalog objects in split '" +
                          std::string(to_string(split)) + "'");
  }
  return pool;
}

BenchmarkResult run_benchmark(const BenchmarkOptions& options,
                              const Environment& env) {
  if (options.levels.empty()) {
    throw InvalidArgument("run_benchmark: empty level set");
  }
  for (int level : options.levels) {
    if (level < 1 || level > 4) {
      throw InvalidArgument("run_benchmark: level " + std::to_string(level) +
                            " outside 1..4");
    }
  }
  if (options.episodes_per_level && *options.episodes_per_level < 1) {
    throw InvalidArgument("run_benchmark: episodes per level must be >= 1");
  }
  if (options.step_budget < 1) {
    throw InvalidArgument("run_benchmark: step budget must be >= 1");
  }
  const std::vector<std::string> pool = object_pool(env.catalog, options.split);
  auto config_for = [&](int level, int index) {
    uint64_t seed = episode_seed(options.seed, level, index);
    const std::string& object = pool[splitmix64(seed) % pool.size()];
    return env.episode(level, object, seed);
  };

  BenchmarkResult result;
  result.options = options;
  std::vector<int> levels = options.levels;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  for (int level : levels) {
    std::vector<EpisodeConfig> configs;
    std::vector<EpisodeLog> logs;
    if (options.episodes_per_level) {
      for (int i = 0; i < *options.episodes_per_level; ++i) {
        configs.push_back(config_for(level, i));
      }
      logs.resize(configs.size());
      run_range(configs, 0, configs.size(), env, options.workers, logs);
    } else {
      long long used = 0;
      size_t kept = 0;
      while (used < options.step_budget) {
        size_t begin = configs.size();
        for (int i = 0; i < kBudgetBatch; ++i) {
          configs.push_back(config_for(level, static_cast<int>(configs.size())));
        }
        logs.resize(configs.size());
        run_range(configs, begin, configs.size(), env, options.workers, logs);
        for (size_t i = begin; i < configs.size() && used < options.step_budget;
             ++i) {
          used += logs[i].decision_steps();
          kept = i + 1;
        }
      }
      logs.resize(kept);
    }

    std::vector<EpisodeOutcome> outcomes;
    std::map<std::string, std::vector<EpisodeOutcome>> by_category;
    for (const EpisodeLog& log : logs) {
      outcomes.push_back(summarize(log));
      by_category[log.category].push_back(outcomes.back());
    }
    std::string split(to_string(options.split));
    result.report.rows.push_back(aggregate(outcomes, level, split, "all"));
    for (const auto& [category, group] : by_category) {
      result.report.rows.push_back(aggregate(group, level, split, category));
    }
    for (EpisodeLog& log : logs) result.logs.push_back(std::move(log));
  }
  return result;
}

std::string BenchmarkResult::csv() const {
  std::string out(kCsvHeader);
  out += "\n";
  for (const MetricsRow& r : report.rows) {
    out += std::to_string(r.level) + "," + r.split + "," + r.category + "," +
           std::to_string(r.n_episodes) + "," + fixed(r.gsr) + "," +
           fixed(r.ossr) + "," + fixed(r.ossr_alt) + "," + fixed(r.tsc) + "," +
           std::to_string(options.seed) + "\n";
  }
  return out;
}

std::string BenchmarkResult::logs_jsonl() const {
  std::string out;
  for (const EpisodeLog& log : logs) {
    out += log.to_json();
    out += "\n";
  }
  return out;
}

}  // namespace dqbench
