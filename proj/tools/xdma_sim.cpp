/*
 * Copyright 2026 The XDMA Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: run, sweep, kvcache, verify.
//
// Exit codes: 0 success, 1 oracle mismatch or failed sweep point, 2 any
// other error (bad input, simulation fault, exceeded cycle budget).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include <CLI11.hpp>

#include "xdma/harness.hpp"

namespace {

using namespace xdma;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

void print_metrics(const Metrics& m) {
  std::printf("cycles            %llu\n", static_cast<unsigned long long>(m.cycles));
  std::printf("bytes             %llu\n", static_cast<unsigned long long>(m.bytes));
  std::printf("effective_bw      %.6f B/cycle\n", m.effective_bw);
  std::printf("utilization       %.6f\n", m.utilization);
  std::printf("bank_conflict     %llu\n", static_cast<unsigned long long>(m.stalls.bank_conflict));
  std::printf("buffer_full       %llu\n", static_cast<unsigned long long>(m.stalls.buffer_full));
  std::printf("link_backpressure %llu\n", static_cast<unsigned long long>(m.stalls.link_backpressure));
  std::printf("cfg_phase         %llu\n", static_cast<unsigned long long>(m.stalls.cfg_phase));
}

std::string metrics_csv(const Metrics& m, const std::string& label) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%llu,%llu,%.6f,%.6f,%llu,%llu,%llu,%llu\n", label.c_str(),
                static_cast<unsigned long long>(m.cycles), static_cast<unsigned long long>(m.bytes), m.effective_bw,
                m.utilization, static_cast<unsigned long long>(m.stalls.bank_conflict),
                static_cast<unsigned long long>(m.stalls.buffer_full),
                static_cast<unsigned long long>(m.stalls.link_backpressure),
                static_cast<unsigned long long>(m.stalls.cfg_phase));
  return buf;
}

constexpr const char* kMetricsHeader =
    "case,cycles,bytes,effective_bw,utilization,bank_conflict,buffer_full,link_backpressure,cfg_phase\n";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-level simulator of a distributed cross-cluster DMA"};
  app.require_subcommand(1);

  std::string config_path, input_path, trace_path, csv_path, summary_path, stage = "load";
  std::uint64_t seed = 1, rows = 2048, cols = 512;
  Cycle budget = 100'000'000;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* run = app.add_subcommand("run", "Simulate a task file and verify the destination memory");
  run->add_option("config", config_path, "SoC config (JSON)")->required();
  run->add_option("tasks", input_path, "Task file (JSON)")->required();
  run->add_option("--trace", trace_path, "Write a JSON-lines trace");
  run->add_option("--csv", csv_path, "Write the metrics as CSV");
  run->add_option("--seed", seed, "Source data seed");
  run->add_option("--cycle-budget", budget, "Abort after this many cycles");

  auto* sweep = app.add_subcommand("sweep", "Run a layout-transformation sweep");
  sweep->add_option("config", config_path, "SoC config (JSON)")->required();
  sweep->add_option("grid", input_path, "Sweep grid (JSON)")->required();
  sweep->add_option("--csv", csv_path, "Write per-point rows");
  sweep->add_option("--summary", summary_path, "Write per-setup averages");
  sweep->add_option("--seed", seed, "Source data seed (overrides the grid)");
  sweep->add_option("--jobs", jobs, "Worker threads");

  auto* kv = app.add_subcommand("kvcache", "KV-cache prefill or load benchmark");
  kv->add_option("config", config_path, "SoC config (JSON)")->required();
  kv->add_option("--stage", stage, "prefill or load");
  kv->add_option("--rows", rows, "Matrix rows");
  kv->add_option("--cols", cols, "Matrix columns");
  kv->add_option("--csv", csv_path, "Write the metrics as CSV");
  kv->add_option("--trace", trace_path, "Write a JSON-lines trace");
  kv->add_option("--seed", seed, "Source data seed");
  kv->add_option("--cycle-budget", budget, "Abort after this many cycles");

  auto* verify = app.add_subcommand("verify", "Check a task file functionally against the references");
  verify->add_option("config", config_path, "SoC config (JSON)")->required();
  verify->add_option("tasks", input_path, "Task file (JSON)")->required();
  verify->add_option("--seed", seed, "Source data seed");

  CLI11_PARSE(app, argc, argv);

  try {
    const SocConfig config = load_config_file(config_path);
    std::unique_ptr<std::ofstream> trace;
    RunOptions opts;
    opts.seed = seed;
    opts.cycle_budget = budget;
    if (!trace_path.empty()) {
      trace = std::make_unique<std::ofstream>(trace_path, std::ios::binary);
      if (!*trace) throw ConfigError("cannot write " + trace_path);
      opts.trace = trace.get();
    }

    if (*run) {
      const auto r = run_transfer(config, load_task_file(input_path), opts);
      print_metrics(r.metrics);
      std::printf("verified          %s\n", r.verified ? "yes" : "no");
      if (!csv_path.empty()) write_file(csv_path, kMetricsHeader + metrics_csv(r.metrics, "run"));
    } else if (*sweep) {
      SweepGrid grid = load_grid_file(input_path);
      if (sweep->count("--seed")) grid.seed = seed;
      const auto result = sweep_reshape(config, grid, jobs);
      if (!csv_path.empty()) write_file(csv_path, sweep_csv(result));
      if (!summary_path.empty()) write_file(summary_path, summary_csv(result));
      std::printf("%-14s %6s %10s %10s\n", "setup", "points", "mean_util", "stddev");
      for (const auto& s : result.summary) {
        std::printf("%-14s %6zu %10.6f %10.6f\n", s.setup.c_str(), s.points, s.mean_utilization,
                    s.stddev_utilization);
      }
      int failed = 0;
      for (const auto& row : result.rows) {
        if (row.error.empty()) continue;
        ++failed;
        std::fprintf(stderr, "%s %s->%s %llu: %s\n", row.setup.c_str(), row.layout_src.c_str(),
                     row.layout_dst.c_str(), static_cast<unsigned long long>(row.m), row.error.c_str());
      }
      if (failed) {
        std::fprintf(stderr, "%d of %zu points failed\n", failed, result.rows.size());
        return 1;
      }
    } else if (*kv) {
      const auto cases = kvcache_bench(config, parse_kv_stage(stage), rows, cols, opts);
      std::string csv = "case,rows,cols,cycles,utilization,baseline_cycles,speedup\n";
      for (const auto& k : cases) {
        std::printf("%-9s %llux%llu cycles %llu util %.6f baseline %llu speedup %.2fx\n", k.name.c_str(),
                    static_cast<unsigned long long>(rows), static_cast<unsigned long long>(cols),
                    static_cast<unsigned long long>(k.metrics.cycles), k.metrics.utilization,
                    static_cast<unsigned long long>(k.baseline_cycles), k.speedup);
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s,%llu,%llu,%llu,%.6f,%llu,%.6f\n", k.name.c_str(),
                      static_cast<unsigned long long>(rows), static_cast<unsigned long long>(cols),
                      static_cast<unsigned long long>(k.metrics.cycles), k.metrics.utilization,
                      static_cast<unsigned long long>(k.baseline_cycles), k.speedup);
        csv += buf;
      }
      if (!csv_path.empty()) write_file(csv_path, csv);
    } else if (*verify) {
      const auto tasks = load_task_file(input_path);
      verify_tasks(config, tasks, seed);
      std::printf("%zu tasks match the references\n", tasks.tasks.size());
    }
  } catch (const OracleMismatch& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
