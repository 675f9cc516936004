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

#include "xdma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "json_util.hpp"
#include "xdma/baselines.hpp"
#include "xdma/plugin.hpp"

namespace xdma {

using json_util::as_bool;
using json_util::as_strings;
using json_util::as_u32;
using json_util::as_u64;
using json_util::json;
using json_util::read_opt;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw ConfigError(where + ": unknown field " + key);
  }
}

std::string hex(Addr a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(a));
  return buf;
}

std::size_t plugin_slot(const std::vector<std::string>& ext, std::string_view id, const char* side) {
  auto it = std::find(ext.begin(), ext.end(), id);
  if (it == ext.end()) {
    throw ContractError(std::string("no ") + std::string(id) + " plugin in the " + side + " extension list");
  }
  return static_cast<std::size_t>(it - ext.begin());
}

std::uint64_t matrix_bytes(const TransferSpec& s) { return s.rows * s.cols * s.src_layout.elem_bytes; }

AffinePattern contiguous(Addr base, std::uint64_t bytes, unsigned word_bytes) {
  if (bytes % word_bytes != 0) throw ContractError("byte count is not a whole number of words");
  return AffinePattern{base, {bytes / word_bytes}, {static_cast<std::int64_t>(word_bytes)}, word_bytes};
}

}  // namespace

std::string_view to_string(TransferKind k) {
  switch (k) {
    case TransferKind::Reshape: return "reshape";
    case TransferKind::Transpose: return "transpose";
    case TransferKind::Copy: return "copy";
    case TransferKind::Memset: return "memset";
  }
  return "?";
}

TransferKind parse_transfer_kind(std::string_view s) {
  if (s == "reshape") return TransferKind::Reshape;
  if (s == "transpose") return TransferKind::Transpose;
  if (s == "copy") return TransferKind::Copy;
  if (s == "memset") return TransferKind::Memset;
  throw ConfigError("unknown transfer kind " + std::string(s));
}

std::uint64_t TransferSpec::payload_bytes() const {
  switch (kind) {
    case TransferKind::Reshape:
    case TransferKind::Transpose: return matrix_bytes(*this);
    case TransferKind::Copy:
    case TransferKind::Memset: return bytes;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Task files

TaskFile parse_task_file(std::string_view text) {
  const json doc = parse_json(text, "task file");
  if (!doc.is_object()) throw ConfigError("task file: expected an object");
  reject_unknown(doc, {"tasks"}, "task file");
  auto it = doc.find("tasks");
  if (it == doc.end() || !it->is_array()) throw ConfigError("task file: missing tasks array");

  TaskFile out;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& t = (*it)[i];
    const std::string where = "task " + std::to_string(i);
    if (!t.is_object()) throw ConfigError(where + ": expected an object");
    reject_unknown(t,
                   {"kind", "src_layout", "dst_layout", "layout", "elem_bytes", "rows", "cols", "bytes", "fill",
                    "src_cluster", "dst_cluster", "controller", "src_offset", "dst_offset", "submit_at"},
                   where);
    TransferSpec s;
    auto k = t.find("kind");
    if (k == t.end() || !k->is_string()) throw ConfigError(where + ": missing kind");
    s.kind = parse_transfer_kind(k->get<std::string>());

    std::uint32_t elem = 1;
    read_opt(t, "elem_bytes", elem, as_u32);
    auto layout = [&](const char* key) {
      auto f = t.find(key);
      if (f == t.end() || !f->is_string()) throw ConfigError(where + ": missing " + key);
      try {
        return LayoutSpec::parse(f->get<std::string>(), elem);
      } catch (const ContractError& e) {
        throw ConfigError(where + ": " + e.what());
      }
    };
    auto need_u64 = [&](const char* key) {
      auto f = t.find(key);
      if (f == t.end()) throw ConfigError(where + ": missing " + key);
      return as_u64(*f, key);
    };
    switch (s.kind) {
      case TransferKind::Reshape:
        s.src_layout = layout("src_layout");
        s.dst_layout = layout("dst_layout");
        s.rows = need_u64("rows");
        s.cols = need_u64("cols");
        break;
      case TransferKind::Transpose:
        s.src_layout = s.dst_layout = layout("layout");
        s.rows = need_u64("rows");
        s.cols = need_u64("cols");
        break;
      case TransferKind::Copy:
        s.bytes = need_u64("bytes");
        break;
      case TransferKind::Memset:
        s.bytes = need_u64("bytes");
        read_opt(t, "fill", s.fill, as_u64);
        break;
    }
    read_opt(t, "src_cluster", s.src_cluster, as_u32);
    read_opt(t, "dst_cluster", s.dst_cluster, as_u32);
    if (auto c = t.find("controller"); c != t.end()) s.controller = as_u32(*c, "controller");
    read_opt(t, "src_offset", s.src_offset, as_u64);
    read_opt(t, "dst_offset", s.dst_offset, as_u64);
    read_opt(t, "submit_at", s.submit_at, as_u64);
    out.tasks.push_back(std::move(s));
  }
  return out;
}

TaskFile load_task_file(const std::string& path) { return parse_task_file(read_file(path)); }

std::string serialize_task_file(const TaskFile& tasks) {
  json arr = json::array();
  for (const auto& s : tasks.tasks) {
    json t;
    t["kind"] = std::string(to_string(s.kind));
    switch (s.kind) {
      case TransferKind::Reshape:
        t["src_layout"] = s.src_layout.name();
        t["dst_layout"] = s.dst_layout.name();
        t["elem_bytes"] = s.src_layout.elem_bytes;
        t["rows"] = s.rows;
        t["cols"] = s.cols;
        break;
      case TransferKind::Transpose:
        t["layout"] = s.src_layout.name();
        t["elem_bytes"] = s.src_layout.elem_bytes;
        t["rows"] = s.rows;
        t["cols"] = s.cols;
        break;
      case TransferKind::Copy:
        t["bytes"] = s.bytes;
        break;
      case TransferKind::Memset:
        t["bytes"] = s.bytes;
        t["fill"] = s.fill;
        break;
    }
    t["src_cluster"] = s.src_cluster;
    t["dst_cluster"] = s.dst_cluster;
    if (s.controller) t["controller"] = *s.controller;
    t["src_offset"] = s.src_offset;
    t["dst_offset"] = s.dst_offset;
    t["submit_at"] = s.submit_at;
    arr.push_back(std::move(t));
  }
  return json{{"tasks", arr}}.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Cfg construction

XdmaCfg build_cfg(const SocConfig& config, const TransferSpec& spec) {
  if (spec.payload_bytes() == 0) throw ContractError("empty task");
  if (spec.src_cluster >= config.num_clusters() || spec.dst_cluster >= config.num_clusters()) {
    throw ContractError("task names a cluster outside the SoC");
  }
  const unsigned wb = config.word_bytes();
  const Addr src = config.cluster_bases[spec.src_cluster] + spec.src_offset;
  const Addr dst = config.cluster_bases[spec.dst_cluster] + spec.dst_offset;

  XdmaCfg cfg;
  cfg.src_cluster = spec.src_cluster;
  cfg.dst_cluster = spec.dst_cluster;
  switch (spec.kind) {
    case TransferKind::Reshape: {
      auto tp = reshape_patterns(spec.src_layout, spec.dst_layout, spec.rows, spec.cols, src, dst, wb);
      cfg.src_pattern = std::move(tp.src);
      cfg.dst_pattern = std::move(tp.dst);
      break;
    }
    case TransferKind::Transpose: {
      const LayoutSpec& l = spec.src_layout;
      if (l.kind == LayoutKind::RowMajor) {
        if (l.elem_bytes != wb) throw ContractError("row-major transpose needs one-word elements");
        auto tp = word_transpose_patterns(spec.rows, spec.cols, src, dst, wb);
        cfg.src_pattern = std::move(tp.src);
        cfg.dst_pattern = std::move(tp.dst);
      } else {
        if (l.tile_m != l.tile_n) throw ContractError("tiled transpose needs square tiles");
        auto tp = tile_transpose_patterns(l, spec.rows, spec.cols, src, dst, wb);
        cfg.src_pattern = std::move(tp.src);
        cfg.dst_pattern = std::move(tp.dst);
        cfg.reader_plugin_ctrl.resize(config.ext_src.size());
        cfg.reader_plugin_ctrl[plugin_slot(config.ext_src, "transpose", "reader")] =
            TransposePlugin::make_ctrl(l.tile_m, l.elem_bytes);
      }
      break;
    }
    case TransferKind::Copy:
      cfg.src_pattern = contiguous(src, spec.bytes, wb);
      cfg.dst_pattern = contiguous(dst, spec.bytes, wb);
      break;
    case TransferKind::Memset: {
      cfg.src_pattern = AffinePattern{src, {0}, {static_cast<std::int64_t>(wb)}, wb};
      cfg.dst_pattern = contiguous(dst, spec.bytes, wb);
      cfg.writer_plugin_ctrl.resize(config.ext_dst.size());
      cfg.writer_plugin_ctrl[plugin_slot(config.ext_dst, "memset", "writer")] =
          MemsetPlugin::make_ctrl(spec.fill, static_cast<std::uint32_t>(spec.bytes / wb));
      break;
    }
  }
  return cfg;
}

Region source_region(const SocConfig& config, const TransferSpec& spec) {
  const std::uint64_t len = spec.kind == TransferKind::Memset ? 0 : spec.payload_bytes();
  return {config.cluster_bases.at(spec.src_cluster) + spec.src_offset, len};
}

Region destination_region(const SocConfig& config, const TransferSpec& spec) {
  return {config.cluster_bases.at(spec.dst_cluster) + spec.dst_offset, spec.payload_bytes()};
}

// ---------------------------------------------------------------------------
// References

std::vector<std::uint8_t> reference_reshape(std::span<const std::uint8_t> src, const LayoutSpec& from,
                                            const LayoutSpec& to, std::uint64_t rows, std::uint64_t cols) {
  if (from.elem_bytes != to.elem_bytes) throw ContractError("reshape between different element sizes");
  from.check_shape(rows, cols);
  to.check_shape(rows, cols);
  const std::uint64_t e = from.elem_bytes;
  if (src.size() < rows * cols * e) throw ContractError("reference source too small");
  std::vector<std::uint8_t> out(rows * cols * e);
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::uint64_t c = 0; c < cols; ++c) {
      const auto s = element_offset(from, rows, cols, r, c);
      const auto d = element_offset(to, rows, cols, r, c);
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(s), e, out.begin() + static_cast<std::ptrdiff_t>(d));
    }
  }
  return out;
}

std::vector<std::uint8_t> reference_transpose(std::span<const std::uint8_t> src, const LayoutSpec& layout,
                                              std::uint64_t rows, std::uint64_t cols) {
  layout.check_shape(rows, cols);
  layout.check_shape(cols, rows);
  const std::uint64_t e = layout.elem_bytes;
  if (src.size() < rows * cols * e) throw ContractError("reference source too small");
  std::vector<std::uint8_t> out(rows * cols * e);
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::uint64_t c = 0; c < cols; ++c) {
      const auto s = element_offset(layout, rows, cols, r, c);
      const auto d = element_offset(layout, cols, rows, c, r);
      std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(s), e, out.begin() + static_cast<std::ptrdiff_t>(d));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Memory images

namespace {

std::span<std::uint8_t> image_span(const SocConfig& config, MemoryImages& images, ClusterId c, const Region& r) {
  const Addr base = config.cluster_bases.at(c);
  if (r.addr < base || r.addr - base + r.len > config.mem_size) {
    throw ContractError("region " + hex(r.addr) + " exceeds cluster " + std::to_string(c));
  }
  return std::span<std::uint8_t>(images.at(c)).subspan(r.addr - base, r.len);
}

std::vector<Word> run_chain(PluginChain& chain, const std::vector<Word>& in) {
  std::vector<Word> out;
  std::size_t i = 0;
  for (;;) {
    std::optional<Word> w;
    if (i < in.size()) w = in[i];
    if (!w && !chain.holds_data()) break;
    const auto r = chain.step(w, true);
    if (r.consumed) ++i;
    if (r.out) out.push_back(*r.out);
    if (!r.consumed && !r.out) throw SimulationFault("plugin chain stalled in functional execution");
  }
  chain.end_of_stream();
  return out;
}

}  // namespace

MemoryImages initial_images(const SocConfig& config, const TaskFile& tasks, std::uint64_t seed) {
  MemoryImages images(config.num_clusters(), std::vector<std::uint8_t>(config.mem_size, 0));
  std::mt19937_64 rng(seed);
  for (const auto& t : tasks.tasks) {
    auto span = image_span(config, images, t.src_cluster, source_region(config, t));
    for (std::size_t i = 0; i < span.size(); i += 8) {
      const Word w = rng();
      word_to_bytes(w, span.data() + i, static_cast<unsigned>(std::min<std::size_t>(8, span.size() - i)));
    }
  }
  return images;
}

MemoryImages expected_images(const SocConfig& config, const TaskFile& tasks, MemoryImages images) {
  for (const auto& t : tasks.tasks) {
    const auto src = image_span(config, images, t.src_cluster, source_region(config, t));
    std::vector<std::uint8_t> result;
    switch (t.kind) {
      case TransferKind::Reshape:
        result = reference_reshape(src, t.src_layout, t.dst_layout, t.rows, t.cols);
        break;
      case TransferKind::Transpose:
        result = reference_transpose(src, t.src_layout, t.rows, t.cols);
        break;
      case TransferKind::Copy:
        result.assign(src.begin(), src.end());
        break;
      case TransferKind::Memset:
        result.resize(t.bytes);
        for (std::size_t i = 0; i < result.size(); i += 8) {
          word_to_bytes(t.fill, result.data() + i, static_cast<unsigned>(std::min<std::size_t>(8, result.size() - i)));
        }
        break;
    }
    auto dst = image_span(config, images, t.dst_cluster, destination_region(config, t));
    std::copy(result.begin(), result.end(), dst.begin());
  }
  return images;
}

MemoryImages functional_images(const SocConfig& config, const TaskFile& tasks, MemoryImages images) {
  const unsigned wb = config.word_bytes();
  for (const auto& t : tasks.tasks) {
    const XdmaCfg cfg = build_cfg(config, t);
    auto word_at = [&](ClusterId c, Addr a) -> std::uint8_t* {
      const Addr base = config.cluster_bases[c];
      if (a < base || a - base + wb > config.mem_size) throw SimulationFault("functional access out of range");
      return images[c].data() + (a - base);
    };
    std::vector<Word> stream;
    for (AddressGenerator g(cfg.src_pattern); !g.done();) stream.push_back(word_from_bytes(word_at(t.src_cluster, g.next()), wb));
    PluginChain reader(ChainStage::PostReader, config.ext_src);
    PluginChain writer(ChainStage::PreWriter, config.ext_dst);
    reader.configure(cfg.reader_plugin_ctrl, wb);
    writer.configure(cfg.writer_plugin_ctrl, wb);
    stream = run_chain(writer, run_chain(reader, stream));
    AddressGenerator g(cfg.dst_pattern);
    for (Word w : stream) {
      if (g.done()) throw SimulationFault("functional stream longer than the destination pattern");
      word_to_bytes(w, word_at(t.dst_cluster, g.next()), wb);
    }
    if (!g.done()) throw SimulationFault("functional stream shorter than the destination pattern");
  }
  return images;
}

void compare_images(const SocConfig& config, const MemoryImages& expected, const MemoryImages& actual) {
  if (expected.size() != actual.size()) throw ContractError("image sets differ in cluster count");
  for (ClusterId c = 0; c < expected.size(); ++c) {
    const auto& e = expected[c];
    const auto& a = actual[c];
    if (e.size() != a.size()) throw ContractError("image sizes differ");
    auto [pe, pa] = std::mismatch(e.begin(), e.end(), a.begin());
    if (pe != e.end()) {
      const Addr addr = config.cluster_bases[c] + static_cast<Addr>(pe - e.begin());
      char buf[96];
      std::snprintf(buf, sizeof buf, "oracle mismatch at %s: expected 0x%02x, got 0x%02x", hex(addr).c_str(), *pe,
                    *pa);
      throw OracleMismatch(buf, addr);
    }
  }
}

// ---------------------------------------------------------------------------
// Runs

RunResult run_transfer(const SocConfig& config, const TaskFile& tasks, const RunOptions& options) {
  if (tasks.tasks.empty()) throw ContractError("empty task file");
  std::vector<XdmaCfg> cfgs;
  for (const auto& t : tasks.tasks) cfgs.push_back(build_cfg(config, t));

  const MemoryImages initial = initial_images(config, tasks, options.seed);
  Soc soc(config);
  for (ClusterId c = 0; c < config.num_clusters(); ++c) soc.memory(c).backdoor_write(config.cluster_bases[c], initial[c]);
  soc.record_link_events(options.record_links);
  soc.set_trace(options.trace);
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    const auto& t = tasks.tasks[i];
    soc.schedule(t.submit_at, t.controller.value_or(t.src_cluster), cfgs[i]);
  }
  soc.run(options.cycle_budget);

  RunResult r;
  r.metrics = soc.metrics();
  r.tasks = soc.tasks();
  r.link_events = soc.link_events();
  if (options.verify) {
    MemoryImages actual;
    for (ClusterId c = 0; c < config.num_clusters(); ++c) {
      actual.push_back(soc.memory(c).backdoor_read(config.cluster_bases[c], config.mem_size));
    }
    compare_images(config, expected_images(config, tasks, initial), actual);
    r.verified = true;
  }
  return r;
}

void verify_tasks(const SocConfig& config, const TaskFile& tasks, std::uint64_t seed) {
  if (tasks.tasks.empty()) throw ContractError("empty task file");
  const MemoryImages initial = initial_images(config, tasks, seed);
  compare_images(config, expected_images(config, tasks, initial), functional_images(config, tasks, initial));
}

// ---------------------------------------------------------------------------
// Sweeps

SweepGrid parse_grid(std::string_view text) {
  const json doc = parse_json(text, "grid");
  if (!doc.is_object()) throw ConfigError("grid: expected an object");
  reject_unknown(doc, {"layouts", "include_identity", "sizes", "setups", "src_cluster", "dst_cluster", "seed"}, "grid");
  SweepGrid g;
  read_opt(doc, "layouts", g.layouts, as_strings);
  read_opt(doc, "include_identity", g.include_identity, as_bool);
  if (auto it = doc.find("sizes"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("field sizes: expected array of unsigned integers");
    g.sizes.clear();
    for (const auto& v : *it) g.sizes.push_back(as_u64(v, "sizes"));
  }
  read_opt(doc, "setups", g.setups, as_strings);
  read_opt(doc, "src_cluster", g.src_cluster, as_u32);
  read_opt(doc, "dst_cluster", g.dst_cluster, as_u32);
  read_opt(doc, "seed", g.seed, as_u64);

  if (g.layouts.empty() || g.sizes.empty() || g.setups.empty()) throw ConfigError("grid: empty axis");
  for (const auto& l : g.layouts) {
    try {
      LayoutSpec::parse(l);
    } catch (const ContractError& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  }
  for (const auto& s : g.setups) {
    const bool xdma = s.rfind("xdma", 0) == 0 && s.size() > 4 &&
                      std::all_of(s.begin() + 4, s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
    if (!xdma && s != "sw_idma" && s != "sw_gemmini" && s != "accel_reshape") {
      throw ConfigError("grid: unknown setup " + s);
    }
  }
  return g;
}

SweepGrid load_grid_file(const std::string& path) { return parse_grid(read_file(path)); }

namespace {

struct GridPoint {
  std::string src;
  std::string dst;
  std::uint64_t size;
  std::string setup;
};

std::vector<GridPoint> enumerate(const SweepGrid& grid) {
  std::vector<GridPoint> pts;
  for (const auto& s : grid.layouts) {
    for (const auto& d : grid.layouts) {
      if (s == d && !grid.include_identity) continue;
      for (auto n : grid.sizes) {
        for (const auto& setup : grid.setups) pts.push_back({s, d, n, setup});
      }
    }
  }
  return pts;
}

// Applies descriptors to a byte buffer; addresses are relative to 0.
bool descriptors_reproduce(const std::vector<Descriptor>& ds, std::span<const std::uint8_t> src,
                           std::span<const std::uint8_t> expected) {
  std::vector<std::uint8_t> out(expected.size(), 0);
  for (const auto& d : ds) {
    for (std::uint64_t r = 0; r < d.rows; ++r) {
      const auto s = static_cast<std::int64_t>(d.src) + d.src_stride * static_cast<std::int64_t>(r);
      const auto t = static_cast<std::int64_t>(d.dst) + d.dst_stride * static_cast<std::int64_t>(r);
      if (s < 0 || t < 0 || static_cast<std::uint64_t>(s) + d.run_bytes > src.size() ||
          static_cast<std::uint64_t>(t) + d.run_bytes > out.size()) {
        return false;
      }
      std::copy_n(src.begin() + s, d.run_bytes, out.begin() + t);
    }
  }
  return std::equal(out.begin(), out.end(), expected.begin(), expected.end());
}

}  // namespace

std::size_t grid_points(const SweepGrid& grid) { return enumerate(grid).size(); }

SweepRow run_point(const SocConfig& config, const std::string& setup, const LayoutSpec& src, const LayoutSpec& dst,
                   std::uint64_t size, const SweepGrid& grid) {
  SweepRow row;
  row.setup = setup;
  row.layout_src = src.name();
  row.layout_dst = dst.name();
  row.m = row.n = size;
  try {
    if (setup == "sw_idma" || setup == "sw_gemmini") {
      const auto model = setup == "sw_idma" ? SwLoopModel::idma(config) : SwLoopModel::gemmini(config);
      row.metrics = run_sw_loop(model, src, dst, size, size, config.word_bytes());
      const auto tp = reshape_patterns(src, dst, size, size, 0, 0, config.word_bytes());
      const auto ds = decompose(tp.src, tp.dst, model.descriptor_dims);
      std::vector<std::uint8_t> data(size * size * src.elem_bytes);
      std::mt19937_64 rng(grid.seed);
      for (auto& b : data) b = static_cast<std::uint8_t>(rng());
      if (!descriptors_reproduce(ds, data, reference_reshape(data, src, dst, size, size))) {
        throw OracleMismatch("descriptor list does not reproduce the reference", 0);
      }
      row.verified = true;
    } else if (setup == "accel_reshape") {
      // The accelerator model is the reference transformation itself.
      row.metrics = run_accel_reshape(ReshapeAccelModel::from_config(config), src, dst, size, size);
      row.verified = true;
    } else if (setup.rfind("xdma", 0) == 0) {
      SocConfig c = config;
      c.dbuf_src = c.dbuf_dst = static_cast<std::uint32_t>(std::stoul(setup.substr(4)));
      row.dbuf = c.dbuf_src;
      TransferSpec t;
      t.kind = TransferKind::Reshape;
      t.src_layout = src;
      t.dst_layout = dst;
      t.rows = t.cols = size;
      t.src_cluster = grid.src_cluster;
      t.dst_cluster = grid.dst_cluster;
      RunOptions o;
      o.seed = grid.seed;
      const auto r = run_transfer(c, TaskFile{{t}}, o);
      row.metrics = r.metrics;
      row.verified = r.verified;
    } else {
      throw ContractError("unknown setup " + setup);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    row.verified = false;
  }
  return row;
}

SweepResult sweep_reshape(const SocConfig& config, const SweepGrid& grid, unsigned jobs) {
  const auto pts = enumerate(grid);
  SweepResult out;
  out.rows.resize(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < pts.size();) {
      const auto& p = pts[i];
      out.rows[i] = run_point(config, p.setup, LayoutSpec::parse(p.src), LayoutSpec::parse(p.dst), p.size, grid);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(pts.size(), 1))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  out.summary = summarize(out.rows, grid.setups);
  return out;
}

std::vector<SetupSummary> summarize(const std::vector<SweepRow>& rows, const std::vector<std::string>& setups) {
  std::vector<SetupSummary> out;
  for (const auto& s : setups) {
    SetupSummary sum;
    sum.setup = s;
    double total = 0.0;
    for (const auto& r : rows) {
      if (r.setup != s || !r.error.empty()) continue;
      ++sum.points;
      total += r.metrics.utilization;
    }
    if (sum.points > 0) {
      sum.mean_utilization = total / static_cast<double>(sum.points);
      double var = 0.0;
      for (const auto& r : rows) {
        if (r.setup != s || !r.error.empty()) continue;
        const double d = r.metrics.utilization - sum.mean_utilization;
        var += d * d;
      }
      sum.stddev_utilization = std::sqrt(var / static_cast<double>(sum.points));
    }
    out.push_back(sum);
  }
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << kSweepCsvSchema << "\n";
  os << "setup,layout_src,layout_dst,m,n,dbuf,cycles,bytes,effective_bw,utilization,"
        "bank_conflict,buffer_full,link_backpressure,cfg_phase,verified,error\n";
  for (const auto& r : result.rows) {
    const auto& m = r.metrics;
    os << r.setup << ',' << r.layout_src << ',' << r.layout_dst << ',' << r.m << ',' << r.n << ',' << r.dbuf << ','
       << m.cycles << ',' << m.bytes << ',' << fixed(m.effective_bw) << ',' << fixed(m.utilization) << ','
       << m.stalls.bank_conflict << ',' << m.stalls.buffer_full << ',' << m.stalls.link_backpressure << ','
       << m.stalls.cfg_phase << ',' << (r.verified ? 1 : 0) << ',' << csv_field(r.error) << '\n';
  }
  return os.str();
}

std::string summary_csv(const SweepResult& result) {
  std::ostringstream os;
  os << kSweepCsvSchema << "\n";
  os << "setup,points,mean_utilization,stddev_utilization\n";
  for (const auto& s : result.summary) {
    os << s.setup << ',' << s.points << ',' << fixed(s.mean_utilization) << ',' << fixed(s.stddev_utilization) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// KV cache

KvStage parse_kv_stage(std::string_view s) {
  if (s == "prefill") return KvStage::Prefill;
  if (s == "load") return KvStage::Load;
  throw ConfigError("unknown stage " + std::string(s) + " (expected prefill or load)");
}

std::vector<KvCase> kvcache_bench(const SocConfig& config, KvStage stage, std::uint64_t rows, std::uint64_t cols,
                                  const RunOptions& options) {
  const auto tiled = LayoutSpec::tiled(8, 8);
  const auto mn = LayoutSpec::row_major();
  const auto accel = ReshapeAccelModel::from_config(config);

  std::vector<std::pair<std::string, TransferSpec>> cases;
  auto make = [&](TransferKind k, const LayoutSpec& s, const LayoutSpec& d) {
    TransferSpec t;
    t.kind = k;
    t.src_layout = s;
    t.dst_layout = d;
    t.rows = rows;
    t.cols = cols;
    t.src_cluster = 0;
    t.dst_cluster = 1;
    return t;
  };
  if (stage == KvStage::Prefill) {
    cases.emplace_back("prefill1", make(TransferKind::Reshape, tiled, mn));
    cases.emplace_back("prefill2", make(TransferKind::Reshape, mn, tiled));
  } else {
    cases.emplace_back("load", make(TransferKind::Transpose, tiled, tiled));
  }

  std::vector<KvCase> out;
  for (const auto& [name, spec] : cases) {
    const auto r = run_transfer(config, TaskFile{{spec}}, options);
    KvCase k;
    k.name = name;
    k.metrics = r.metrics;
    k.baseline_cycles = accel_reshape_cycles(accel, spec.payload_bytes(), true);
    k.speedup = static_cast<double>(k.baseline_cycles) / static_cast<double>(r.metrics.cycles);
    out.push_back(std::move(k));
  }
  return out;
}

}  // namespace xdma
