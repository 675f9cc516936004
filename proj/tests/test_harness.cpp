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


#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "support.hpp"
#include "xdma/harness.hpp"
#include "xdma/plugin.hpp"

using namespace xdma;
using namespace xdma::testing;
using Catch::Matchers::ContainsSubstring;

namespace {

TransferSpec reshape(const std::string& a, const std::string& b, std::uint64_t m, std::uint64_t n,
                     std::uint32_t elem = 1) {
  TransferSpec t;
  t.kind = TransferKind::Reshape;
  t.src_layout = LayoutSpec::parse(a, elem);
  t.dst_layout = LayoutSpec::parse(b, elem);
  t.rows = m;
  t.cols = n;
  return t;
}

// Simulates the tasks on `config` from the given images and returns the
// final memory images.
MemoryImages simulate(const SocConfig& config, const std::vector<XdmaCfg>& cfgs, const MemoryImages& init) {
  Soc soc(config);
  for (ClusterId c = 0; c < config.num_clusters(); ++c) soc.memory(c).backdoor_write(config.cluster_bases[c], init[c]);
  for (const auto& cfg : cfgs) soc.schedule(0, cfg.src_cluster, cfg);
  soc.run(10'000'000);
  MemoryImages out;
  for (ClusterId c = 0; c < config.num_clusters(); ++c) {
    out.push_back(soc.memory(c).backdoor_read(config.cluster_bases[c], config.mem_size));
  }
  return out;
}

}  // namespace

TEST_CASE("utilization", "[harness]") {
  CHECK(make_metrics(64, 4096, 64).utilization == 1.0);
  CHECK(make_metrics(128, 4096, 64).utilization == 0.5);
  CHECK(make_metrics(128, 4096, 64).effective_bw == 32.0);
  Metrics zero;
  zero.theoretical_bw = 64;
  CHECK_THROWS_AS(compute_utilization(zero), ContractError);
}

TEST_CASE("contiguous 64 KiB copy", "[harness]") {
  const SocConfig config;
  const auto tf = load_task_file(XDMA_SOURCE_DIR "/configs/copy_64k.json");
  const auto r = run_transfer(config, tf);
  CHECK(r.verified);
  CHECK(r.metrics.bytes == 65536);
  CHECK(r.metrics.utilization >= 0.95);
  // 1024 beats against the measured window: the closed form beats / cycles.
  CHECK(r.metrics.utilization == Catch::Approx(1024.0 / static_cast<double>(r.metrics.cycles)));
  CHECK(r.metrics.stalls.cfg_phase > 0);
}

TEST_CASE("row-major to 8x8 tiles at 512x512 is bit-exact", "[harness]") {
  const SocConfig config;
  const auto r = run_transfer(config, TaskFile{{reshape("MN", "MNM8N8", 512, 512)}});
  CHECK(r.verified);
  CHECK(r.metrics.bytes == 262144);
}

TEST_CASE("references agree with the nested-loop oracle", "[harness]") {
  for (const auto& a : layout_names()) {
    for (const auto& b : layout_names()) {
      const auto from = LayoutSpec::parse(a, 2);
      const auto to = LayoutSpec::parse(b, 2);
      const auto src = random_bytes(32 * 64 * 2, 8);
      CHECK(reference_reshape(src, from, to, 32, 64) == oracle_reshape(src, from, to, 32, 64));
    }
    const auto l = LayoutSpec::parse(a, 8);
    const auto src = random_bytes(32 * 64 * 8, 9);
    CHECK(reference_transpose(src, l, 32, 64) == oracle_transpose(src, l, 32, 64));
  }
}

TEST_CASE("task errors", "[harness]") {
  const SocConfig config;
  TransferSpec t;
  t.kind = TransferKind::Copy;
  t.bytes = 0;
  CHECK_THROWS_WITH(build_cfg(config, t), ContainsSubstring("empty task"));
  CHECK_THROWS_WITH(run_transfer(config, TaskFile{}), ContainsSubstring("empty task file"));
  t.bytes = 4096;
  t.dst_cluster = 5;
  CHECK_THROWS_AS(build_cfg(config, t), ContractError);
  auto tr = reshape("MN", "MN", 16, 16);
  tr.kind = TransferKind::Transpose;
  CHECK_THROWS_WITH(build_cfg(config, tr), ContainsSubstring("one-word elements"));
  tr.src_layout = tr.dst_layout = LayoutSpec::tiled(8, 16);
  tr.cols = 32;
  CHECK_THROWS_WITH(build_cfg(config, tr), ContainsSubstring("square tiles"));
  SocConfig no_tr = config;
  no_tr.ext_src.clear();
  tr.src_layout = tr.dst_layout = LayoutSpec::tiled(8, 8);
  CHECK_THROWS_WITH(build_cfg(no_tr, tr), ContainsSubstring("no transpose plugin"));
}

TEST_CASE("oracle mismatch names the first differing address", "[harness]") {
  const SocConfig config;
  MemoryImages a(2, std::vector<std::uint8_t>(config.mem_size, 0));
  MemoryImages b = a;
  b[1][0x1234] = 7;
  b[1][0x2000] = 9;
  try {
    compare_images(config, a, b);
    FAIL("no mismatch reported");
  } catch (const OracleMismatch& e) {
    CHECK(e.address() == 0x1040'1234);
    CHECK_THAT(e.what(), ContainsSubstring("0x10401234"));
  }
  CHECK_NOTHROW(compare_images(config, a, a));
}

TEST_CASE("cycle budget guards runs", "[harness]") {
  RunOptions o;
  o.cycle_budget = 20;
  CHECK_THROWS_WITH(run_transfer(SocConfig{}, TaskFile{{reshape("MN", "MNM8N8", 64, 64)}}, o),
                    ContainsSubstring("cycle budget exceeded"));
}

TEST_CASE("task files", "[harness]") {
  CHECK_THROWS_WITH(parse_task_file(R"({"tasks": [{"kind": "copy", "bytes": 64, "colour": 1}]})"),
                    ContainsSubstring("task 0: unknown field colour"));
  CHECK_THROWS_AS(parse_task_file(R"({"tasks": [{"kind": "fold", "bytes": 64}]})"), ConfigError);
  CHECK_THROWS_AS(parse_task_file(R"({"jobs": []})"), ConfigError);
  CHECK_THROWS_AS(parse_task_file("{"), ConfigError);

  const auto tf = parse_task_file(R"({"tasks": [
    {"kind": "reshape", "src_layout": "MNM8N16", "dst_layout": "MN", "elem_bytes": 2, "rows": 16, "cols": 32,
     "src_cluster": 1, "dst_cluster": 0, "controller": 0, "src_offset": 4096, "dst_offset": 128, "submit_at": 9},
    {"kind": "memset", "bytes": 256, "fill": "0xdeadbeef", "dst_cluster": 1, "dst_offset": 8192},
    {"kind": "transpose", "layout": "MNM8N8", "rows": 8, "cols": 16, "src_offset": 16384, "dst_offset": 16384},
    {"kind": "copy", "bytes": 1024, "src_offset": 32768, "dst_offset": 32768}]})");
  REQUIRE(tf.tasks.size() == 4);
  const auto& t = tf.tasks[0];
  CHECK(t.src_layout == LayoutSpec::tiled(8, 16, 2));
  CHECK(t.controller == 0u);
  CHECK(t.submit_at == 9);
  CHECK(t.payload_bytes() == 1024);
  CHECK(tf.tasks[1].fill == 0xdeadbeef);
  const auto again = parse_task_file(serialize_task_file(tf));
  CHECK(serialize_task_file(again) == serialize_task_file(tf));
  CHECK(run_transfer(SocConfig{}, tf).verified);
  CHECK_NOTHROW(verify_tasks(SocConfig{}, tf));
}

TEST_CASE("bundled task files verify", "[harness]") {
  for (const char* name : {"copy_64k", "duplex_64k", "reshape_mixed"}) {
    INFO(name);
    const auto tf = load_task_file(std::string(XDMA_SOURCE_DIR "/configs/") + name + ".json");
    CHECK(run_transfer(SocConfig{}, tf).verified);
  }
}

TEST_CASE("memset into a strided destination", "[harness]") {
  const SocConfig config;
  const Addr dst = config.cluster_bases[1];
  XdmaCfg cfg;
  cfg.src_pattern = {config.cluster_bases[0], {0}, {8}, 8};
  cfg.dst_pattern = reshape_patterns(LayoutSpec::tiled(8, 8), LayoutSpec::row_major(), 64, 64, 0, dst, 8).dst;
  REQUIRE(cfg.dst_pattern.dims() > 1);
  cfg.writer_plugin_ctrl = {MemsetPlugin::make_ctrl(0x0123456789ABCDEF, 512)};
  MemoryImages init(2, std::vector<std::uint8_t>(config.mem_size, 0xEE));
  const auto out = simulate(config, {cfg}, init);
  for (std::size_t i = 0; i < 4096; i += 8) {
    REQUIRE(word_from_bytes(&out[1][i], 8) == 0x0123456789ABCDEF);
  }
  CHECK(out[1][4096] == 0xEE);
}

TEST_CASE("enabled identity plugins do not change the result", "[harness]") {
  SocConfig with;
  with.ext_src = {"identity", "identity"};
  with.ext_dst = {"identity"};
  const SocConfig plain;
  const TaskFile tf{{reshape("MNM8N32", "MNM8N8", 64, 64)}};
  auto cfg = build_cfg(with, tf.tasks[0]);
  cfg.src_cluster = 0;
  cfg.reader_plugin_ctrl = {ControlBits({0x01}), ControlBits({0x01})};
  cfg.writer_plugin_ctrl = {ControlBits({0x01})};
  const auto init = initial_images(plain, tf, 4);
  const auto a = simulate(with, {cfg}, init);
  const auto b = simulate(plain, {build_cfg(plain, tf.tasks[0])}, init);
  CHECK(a == b);
  CHECK_NOTHROW(compare_images(plain, expected_images(plain, tf, init), a));
}

TEST_CASE("pattern transpose and plugin transpose agree", "[harness]") {
  // The same logical 64x32 matrix of 8-byte elements, transposed once by
  // address patterns (row-major) and once by tile permutation plus the
  // in-stream transposer (8x8 tiles).
  const SocConfig config;
  const std::uint64_t m = 64, n = 32;
  const auto logical = random_bytes(m * n * 8, 12);
  auto run_in = [&](const LayoutSpec& l) {
    TransferSpec t;
    t.kind = TransferKind::Transpose;
    t.src_layout = t.dst_layout = l;
    t.rows = m;
    t.cols = n;
    MemoryImages init(2, std::vector<std::uint8_t>(config.mem_size, 0));
    const auto off = oracle_offsets(l, m, n);
    for (std::size_t e = 0; e < m * n; ++e) std::copy_n(&logical[e * 8], 8, &init[0][off[e]]);
    const auto out = simulate(config, {build_cfg(config, t)}, init);
    const auto toff = oracle_offsets(l, n, m);
    std::vector<std::uint8_t> result(m * n * 8);
    for (std::size_t e = 0; e < m * n; ++e) std::copy_n(&out[1][toff[e]], 8, &result[e * 8]);
    return result;
  };
  const auto by_pattern = run_in(LayoutSpec::row_major(8));
  const auto by_plugin = run_in(LayoutSpec::tiled(8, 8, 8));
  CHECK(by_pattern == by_plugin);
  CHECK(by_pattern == oracle_transpose(logical, LayoutSpec::row_major(8), m, n));
}

TEST_CASE("sweep grids", "[harness]") {
  CHECK(grid_points(load_grid_file(XDMA_SOURCE_DIR "/configs/grid_full.json")) == 768);
  CHECK(grid_points(load_grid_file(XDMA_SOURCE_DIR "/configs/grid_desk.json")) == 288);
  CHECK_THROWS_WITH(parse_grid(R"({"setups": ["xdma3", "magic"]})"), ContainsSubstring("unknown setup magic"));
  CHECK_THROWS_AS(parse_grid(R"({"layouts": ["MN", "MNX"]})"), ConfigError);
  CHECK_THROWS_AS(parse_grid(R"({"sizes": []})"), ConfigError);
  CHECK_THROWS_WITH(parse_grid(R"({"dbuf": [3]})"), ContainsSubstring("unknown field dbuf"));
}

TEST_CASE("sweep rows are independent of the worker count", "[harness]") {
  const SocConfig config;
  const auto grid = parse_grid(R"({"layouts": ["MN", "MNM8N8", "MNM8N32"], "sizes": [32, 64],
                                   "setups": ["sw_idma", "sw_gemmini", "accel_reshape", "xdma3", "xdma9"]})");
  const auto one = sweep_reshape(config, grid, 1);
  const auto three = sweep_reshape(config, grid, 3);
  REQUIRE(one.rows.size() == grid_points(grid));
  CHECK(sweep_csv(one) == sweep_csv(three));
  CHECK(summary_csv(one) == summary_csv(three));
  for (const auto& r : one.rows) {
    INFO(r.setup << " " << r.layout_src << "->" << r.layout_dst << " " << r.m);
    CHECK(r.error.empty());
    CHECK(r.verified);
    CHECK(r.metrics.utilization > 0.0);
    CHECK(r.metrics.utilization <= 1.0);
    CHECK(r.metrics.effective_bw == static_cast<double>(r.metrics.bytes) / static_cast<double>(r.metrics.cycles));
  }
  const std::string csv = sweep_csv(one);
  CHECK(csv.rfind(std::string(kSweepCsvSchema) + "\nsetup,layout_src,", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == one.rows.size() + 2);
}

TEST_CASE("failed points are recorded, not thrown", "[harness]") {
  SweepGrid g;
  const auto row = run_point(SocConfig{}, "xdma3", LayoutSpec::tiled(8, 8), LayoutSpec::row_major(), 12, g);
  CHECK_FALSE(row.error.empty());
  CHECK_FALSE(row.verified);
  CHECK(summarize({row}, {"xdma3"})[0].points == 0);
}

TEST_CASE("summary statistics", "[harness]") {
  std::vector<SweepRow> rows(4);
  const double u[] = {0.2, 0.4, 0.6, 0.8};
  for (int i = 0; i < 4; ++i) {
    rows[i].setup = "x";
    rows[i].metrics.utilization = u[i];
  }
  const auto s = summarize(rows, {"x", "y"});
  CHECK(s[0].points == 4);
  CHECK(s[0].mean_utilization == Catch::Approx(0.5));
  CHECK(s[0].stddev_utilization == Catch::Approx(std::sqrt(0.05)));
  CHECK(s[1].points == 0);
}

TEST_CASE("kv-cache benchmark", "[harness]") {
  const SocConfig config;
  const auto load = kvcache_bench(config, KvStage::Load, 256, 64);
  REQUIRE(load.size() == 1);
  CHECK(load[0].name == "load");
  CHECK(load[0].speedup > 1.0);
  const auto prefill = kvcache_bench(config, parse_kv_stage("prefill"), 256, 64);
  REQUIRE(prefill.size() == 2);
  CHECK(prefill[0].name == "prefill1");
  CHECK(prefill[1].name == "prefill2");
  CHECK(prefill[0].metrics.bytes == 256 * 64);
  CHECK_THROWS_AS(parse_kv_stage("decode"), ConfigError);
}

TEST_CASE("trace output is JSON lines", "[harness]") {
  std::ostringstream os;
  RunOptions o;
  o.trace = &os;
  TransferSpec t;
  t.kind = TransferKind::Copy;
  t.bytes = 512;
  run_transfer(SocConfig{}, TaskFile{{t}}, o);
  std::istringstream in(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    REQUIRE(line.front() == '{');
    REQUIRE(line.back() == '}');
    ++lines;
  }
  CHECK(lines > 8);
}
