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

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "xdma/config.hpp"
#include "xdma/interconnect.hpp"
#include "xdma/metrics.hpp"
#include "xdma/pattern.hpp"
#include "xdma/soc.hpp"
#include "xdma/task.hpp"

namespace xdma {

/// Destination memory differs from the reference.
class OracleMismatch : public std::runtime_error {
 public:
  OracleMismatch(const std::string& what, Addr first_diff) : std::runtime_error(what), addr_(first_diff) {}
  Addr address() const { return addr_; }

 private:
  Addr addr_;
};

enum class TransferKind { Reshape, Transpose, Copy, Memset };

std::string_view to_string(TransferKind k);
TransferKind parse_transfer_kind(std::string_view s);

/// One task of a task file.
///
/// reshape:   rows x cols matrix from src_layout to dst_layout.
/// transpose: rows x cols matrix in src_layout to its cols x rows transpose
///            in the same layout (square tiles use the transposer plugin;
///            row-major needs one-word elements).
/// copy:      `bytes` contiguous bytes.
/// memset:    `bytes` bytes of `fill` words at the destination.
struct TransferSpec {
  TransferKind kind = TransferKind::Reshape;
  LayoutSpec src_layout;
  LayoutSpec dst_layout;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint64_t bytes = 0;
  Word fill = 0;
  ClusterId src_cluster = 0;
  ClusterId dst_cluster = 1;
  std::optional<ClusterId> controller;  // defaults to src_cluster
  std::uint64_t src_offset = 0;
  std::uint64_t dst_offset = 0;
  Cycle submit_at = 0;

  std::uint64_t payload_bytes() const;
};

struct TaskFile {
  std::vector<TransferSpec> tasks;
};

TaskFile parse_task_file(std::string_view text);
TaskFile load_task_file(const std::string& path);
std::string serialize_task_file(const TaskFile& tasks);

/// The cfg a host would program for `spec` (task id left at 0).
XdmaCfg build_cfg(const SocConfig& config, const TransferSpec& spec);

/// Source and destination byte ranges [first, first+len) of a task.
struct Region {
  Addr addr = 0;
  std::uint64_t len = 0;
};
Region source_region(const SocConfig& config, const TransferSpec& spec);
Region destination_region(const SocConfig& config, const TransferSpec& spec);

// Functional references (closed form, zero simulated time).
std::vector<std::uint8_t> reference_reshape(std::span<const std::uint8_t> src, const LayoutSpec& from,
                                            const LayoutSpec& to, std::uint64_t rows, std::uint64_t cols);
/// `src` holds a rows x cols matrix in `layout`; the result holds the
/// cols x rows transpose in the same layout.
std::vector<std::uint8_t> reference_transpose(std::span<const std::uint8_t> src, const LayoutSpec& layout,
                                              std::uint64_t rows, std::uint64_t cols);

/// Memory images of every cluster, indexed by cluster.
using MemoryImages = std::vector<std::vector<std::uint8_t>>;

/// Deterministic source data: every task's source region filled from a
/// generator seeded with `seed`.
MemoryImages initial_images(const SocConfig& config, const TaskFile& tasks, std::uint64_t seed);
/// Applies each task's reference transformation in task order.
MemoryImages expected_images(const SocConfig& config, const TaskFile& tasks, MemoryImages images);
/// Executes each task's cfg functionally (patterns and plugins, no timing).
MemoryImages functional_images(const SocConfig& config, const TaskFile& tasks, MemoryImages images);
/// Throws OracleMismatch naming the first differing address.
void compare_images(const SocConfig& config, const MemoryImages& expected, const MemoryImages& actual);

struct RunOptions {
  std::uint64_t seed = 1;
  Cycle cycle_budget = 100'000'000;
  bool verify = true;
  bool record_links = false;
  std::ostream* trace = nullptr;
};

struct RunResult {
  Metrics metrics;
  std::vector<TaskRecord> tasks;
  std::vector<LinkEvent> link_events;
  bool verified = false;
};

/// Simulates the task file on a fresh SoC and checks the destination
/// memory against the references.
RunResult run_transfer(const SocConfig& config, const TaskFile& tasks, const RunOptions& options = {});

/// Oracle-only check of the task file: functional execution vs reference.
void verify_tasks(const SocConfig& config, const TaskFile& tasks, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepGrid {
  std::vector<std::string> layouts{"MN", "MNM8N8", "MNM8N16", "MNM8N32"};
  bool include_identity = false;
  std::vector<std::uint64_t> sizes{32, 64, 128, 256};
  std::vector<std::string> setups{"sw_idma", "sw_gemmini", "accel_reshape", "xdma3", "xdma5", "xdma9"};
  ClusterId src_cluster = 0;
  ClusterId dst_cluster = 1;
  std::uint64_t seed = 1;
};

SweepGrid parse_grid(std::string_view text);
SweepGrid load_grid_file(const std::string& path);
std::size_t grid_points(const SweepGrid& grid);

struct SweepRow {
  std::string setup;
  std::string layout_src;
  std::string layout_dst;
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint32_t dbuf = 0;
  Metrics metrics;
  bool verified = false;
  std::string error;
};

struct SetupSummary {
  std::string setup;
  std::size_t points = 0;
  double mean_utilization = 0.0;
  double stddev_utilization = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SetupSummary> summary;  // in grid setup order
};

/// Runs one grid point. Failures are recorded in the row, not thrown.
SweepRow run_point(const SocConfig& config, const std::string& setup, const LayoutSpec& src, const LayoutSpec& dst,
                   std::uint64_t size, const SweepGrid& grid);
/// Every grid point, merged in grid order regardless of `jobs`.
SweepResult sweep_reshape(const SocConfig& config, const SweepGrid& grid, unsigned jobs = 1);
std::vector<SetupSummary> summarize(const std::vector<SweepRow>& rows, const std::vector<std::string>& setups);

inline constexpr std::string_view kSweepCsvSchema = "# xdma-sweep-csv v1";
std::string sweep_csv(const SweepResult& result);
std::string summary_csv(const SweepResult& result);

// ---------------------------------------------------------------------------
// KV cache

enum class KvStage { Prefill, Load };
KvStage parse_kv_stage(std::string_view s);

struct KvCase {
  std::string name;  // "prefill1", "prefill2", "load"
  Metrics metrics;
  std::uint64_t baseline_cycles = 0;  // DMA copy plus reshape accelerator
  double speedup = 0.0;
};

/// Prefill runs both reshapes; load runs the tiled transpose. Transfers go
/// from cluster 0 to cluster 1 and are oracle-checked.
std::vector<KvCase> kvcache_bench(const SocConfig& config, KvStage stage, std::uint64_t rows, std::uint64_t cols,
                                  const RunOptions& options = {});

}  // namespace xdma
