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

// Test-only helpers: a layout oracle written as plain nested loops over the
// storage order (deliberately not sharing code with the library), random
// task-set generation, and the beat-trace protocol checker.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "xdma/harness.hpp"
#include "xdma/interconnect.hpp"

namespace xdma::testing {

/// Byte offset of every element (index r * cols + c), found by walking the
/// layout's storage order and counting.
inline std::vector<std::uint64_t> oracle_offsets(const LayoutSpec& l, std::uint64_t rows, std::uint64_t cols) {
  std::vector<std::uint64_t> off(rows * cols);
  std::uint64_t pos = 0;
  if (l.kind == LayoutKind::RowMajor) {
    for (std::uint64_t r = 0; r < rows; ++r) {
      for (std::uint64_t c = 0; c < cols; ++c) off[r * cols + c] = (pos++) * l.elem_bytes;
    }
    return off;
  }
  for (std::uint64_t ti = 0; ti < rows / l.tile_m; ++ti) {
    for (std::uint64_t tj = 0; tj < cols / l.tile_n; ++tj) {
      for (std::uint64_t m = 0; m < l.tile_m; ++m) {
        for (std::uint64_t n = 0; n < l.tile_n; ++n) {
          off[(ti * l.tile_m + m) * cols + tj * l.tile_n + n] = (pos++) * l.elem_bytes;
        }
      }
    }
  }
  return off;
}

inline std::vector<std::uint8_t> oracle_reshape(const std::vector<std::uint8_t>& src, const LayoutSpec& from,
                                                const LayoutSpec& to, std::uint64_t rows, std::uint64_t cols) {
  const auto a = oracle_offsets(from, rows, cols);
  const auto b = oracle_offsets(to, rows, cols);
  std::vector<std::uint8_t> out(src.size());
  for (std::size_t e = 0; e < a.size(); ++e) {
    for (unsigned k = 0; k < from.elem_bytes; ++k) out[b[e] + k] = src[a[e] + k];
  }
  return out;
}

inline std::vector<std::uint8_t> oracle_transpose(const std::vector<std::uint8_t>& src, const LayoutSpec& l,
                                                  std::uint64_t rows, std::uint64_t cols) {
  const auto a = oracle_offsets(l, rows, cols);
  const auto b = oracle_offsets(l, cols, rows);
  std::vector<std::uint8_t> out(src.size());
  for (std::uint64_t r = 0; r < rows; ++r) {
    for (std::uint64_t c = 0; c < cols; ++c) {
      for (unsigned k = 0; k < l.elem_bytes; ++k) out[b[c * rows + r] + k] = src[a[r * cols + c] + k];
    }
  }
  return out;
}

inline std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng());
  return v;
}

inline const std::vector<std::string>& layout_names() {
  static const std::vector<std::string> names{"MN", "MNM8N8", "MNM8N16", "MNM8N32"};
  return names;
}

/// Four clusters of 1 MiB each, otherwise the defaults.
inline SocConfig four_cluster_config() {
  SocConfig c;
  c.mem_size = 1 << 20;
  c.cluster_bases = {0x1000'0000, 0x1010'0000, 0x1020'0000, 0x1030'0000};
  return c;
}

/// Random tasks with disjoint memory regions: every kind, every cluster
/// pair (local ones included), random issuing controllers and submission
/// cycles.
inline TaskFile random_task_set(const SocConfig& config, std::mt19937_64& rng, std::size_t max_tasks = 6) {
  auto pick = [&](std::uint64_t n) { return static_cast<std::uint64_t>(rng() % n); };
  const unsigned n = config.num_clusters();
  std::vector<std::uint64_t> next(n, 0);
  auto alloc = [&](ClusterId c, std::uint64_t len) {
    const std::uint64_t at = next[c];
    next[c] += (len + 63) / 64 * 64;
    return at;
  };
  TaskFile tf;
  const std::size_t count = 1 + pick(max_tasks);
  for (std::size_t i = 0; i < count; ++i) {
    TransferSpec t;
    t.src_cluster = static_cast<ClusterId>(pick(n));
    t.dst_cluster = static_cast<ClusterId>(pick(n));
    t.controller = static_cast<ClusterId>(pick(n));
    t.submit_at = pick(200);
    switch (pick(4)) {
      case 0: {
        t.kind = TransferKind::Reshape;
        t.src_layout = LayoutSpec::parse(layout_names()[pick(4)]);
        t.dst_layout = LayoutSpec::parse(layout_names()[pick(4)]);
        t.rows = 8 << pick(4);
        t.cols = 32 << pick(2);
        break;
      }
      case 1:
        t.kind = TransferKind::Transpose;
        t.src_layout = t.dst_layout = LayoutSpec::tiled(8, 8);
        t.rows = 8 << pick(4);
        t.cols = 8 << pick(4);
        break;
      case 2:
        t.kind = TransferKind::Copy;
        t.bytes = 8 * (1 + pick(1024));
        break;
      default:
        t.kind = TransferKind::Memset;
        t.bytes = 8 * (1 + pick(512));
        t.fill = rng();
        break;
    }
    t.src_offset = alloc(t.src_cluster, source_region(config, t).len);
    t.dst_offset = alloc(t.dst_cluster, t.payload_bytes());
    tf.tasks.push_back(t);
  }
  return tf;
}

/// Checks every task's beat sequence against cfg+ grant data* finish and
/// the circuit invariant on every link direction (foreign grants excepted).
/// Returns an empty string when the trace conforms, otherwise a description
/// of the first problem.
inline std::string check_protocol(const std::vector<LinkEvent>& events) {
  std::map<TaskId, std::string> seq;
  for (const auto& e : events) {
    char k = '?';
    switch (e.kind) {
      case BeatKind::Cfg: k = 'C'; break;
      case BeatKind::Grant: k = 'G'; break;
      case BeatKind::Data: k = 'D'; break;
      case BeatKind::Finish: k = 'F'; break;
    }
    seq[e.task_id] += k;
  }
  for (const auto& [task, s] : seq) {
    std::size_t i = 0;
    while (i < s.size() && s[i] == 'C') ++i;
    bool ok = i > 0 && i < s.size() && s[i++] == 'G';
    while (ok && i < s.size() && s[i] == 'D') ++i;
    ok = ok && i + 1 == s.size() && s[i] == 'F';
    if (!ok) return "task " + std::to_string(task) + " beat sequence " + s;
  }
  // Between a task's grant (leaving on the reverse direction) and its finish,
  // the data direction carries no other task's beats except grants.
  std::map<TaskId, const LinkEvent*> grant;
  for (const auto& e : events) {
    if (e.kind == BeatKind::Grant) grant[e.task_id] = &e;
  }
  for (const auto& f : events) {
    if (f.kind != BeatKind::Finish) continue;
    const LinkEvent& g = *grant.at(f.task_id);
    if (g.from != f.to || g.to != f.from) return "task " + std::to_string(f.task_id) + " finish on the wrong link";
    for (const auto& o : events) {
      if (o.from != f.from || o.to != f.to || o.task_id == f.task_id || o.kind == BeatKind::Grant) continue;
      if (o.cycle > g.cycle && o.cycle < f.cycle) {
        return std::string(to_string(o.kind)) + " beat of task " + std::to_string(o.task_id) + " at cycle " +
               std::to_string(o.cycle) + " inside the circuit of task " + std::to_string(f.task_id);
      }
    }
  }
  return {};
}

}  // namespace xdma::testing
