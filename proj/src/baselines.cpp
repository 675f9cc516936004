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

#include "xdma/baselines.hpp"

#include <algorithm>
#include <numeric>

namespace xdma {

namespace {

// Words per burst: the innermost loop if it is word-contiguous.
std::uint64_t contiguous_run(const AffinePattern& p) {
  if (p.dims() == 0) return 1;
  return p.strides[0] == static_cast<std::int64_t>(p.word_bytes) ? p.bounds[0] : 1;
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// Source and destination bases are placed in two different clusters of
// the default map; only relative addresses matter to the cost models.
constexpr Addr kSrcBase = 0x1000'0000;
constexpr Addr kDstBase = 0x1040'0000;

}  // namespace

SwLoopModel SwLoopModel::idma(const SocConfig& c) {
  SwLoopModel m;
  m.setup_cycles = c.baselines.idma_setup_cycles;
  m.descriptor_dims = c.baselines.sw_descriptor_dims;
  m.pipelined = c.baselines.sw_pipelined;
  m.burst_overhead = c.baselines.sw_burst_overhead;
  m.link_latency = c.axi_latency;
  m.beat_bytes = c.beat_bytes();
  return m;
}

SwLoopModel SwLoopModel::gemmini(const SocConfig& c) {
  SwLoopModel m = idma(c);
  m.setup_cycles = c.baselines.gemmini_setup_cycles;
  return m;
}

ReshapeAccelModel ReshapeAccelModel::from_config(const SocConfig& c) {
  ReshapeAccelModel m;
  m.words_per_cycle = c.baselines.reshape_words_per_cycle;
  m.passes = c.baselines.reshape_passes;
  m.word_bytes = c.word_bytes();
  m.copy = SwLoopModel::idma(c);
  m.copy.setup_cycles = c.baselines.accel_copy_setup_cycles;
  return m;
}

std::vector<Descriptor> decompose(const AffinePattern& src, const AffinePattern& dst, unsigned dims) {
  if (dims != 1 && dims != 2) throw ContractError("descriptor engines support 1 or 2 dimensions");
  if (src.num_words() != dst.num_words()) throw ContractError("indecomposable request: pattern lengths differ");
  if (src.word_bytes != dst.word_bytes) throw ContractError("indecomposable request: word sizes differ");
  const auto s = simplify(src);
  const auto d = simplify(dst);
  const std::uint64_t total = s.num_words();
  std::vector<Descriptor> out;
  if (total == 0) return out;
  const std::uint64_t run = std::gcd(contiguous_run(s), contiguous_run(d));
  const std::uint64_t run_bytes = run * s.word_bytes;
  const std::uint64_t runs = total / run;

  for (std::uint64_t j = 0; j < runs;) {
    Descriptor desc{s.address_at(j * run), d.address_at(j * run), run_bytes, 1, 0, 0};
    ++j;
    if (dims == 2 && j < runs) {
      const auto ss = static_cast<std::int64_t>(s.address_at(j * run) - desc.src);
      const auto ds = static_cast<std::int64_t>(d.address_at(j * run) - desc.dst);
      desc.src_stride = ss;
      desc.dst_stride = ds;
      while (j < runs &&
             static_cast<std::int64_t>(s.address_at(j * run) - desc.src) == ss * static_cast<std::int64_t>(desc.rows) &&
             static_cast<std::int64_t>(d.address_at(j * run) - desc.dst) == ds * static_cast<std::int64_t>(desc.rows)) {
        ++desc.rows;
        ++j;
      }
      if (desc.rows == 1) desc.src_stride = desc.dst_stride = 0;
    }
    out.push_back(desc);
  }
  return out;
}

std::uint64_t descriptor_data_cycles(const SwLoopModel& model, const Descriptor& d) {
  const std::uint64_t per_burst = ceil_div(d.run_bytes, model.beat_bytes) + model.burst_overhead;
  return d.rows * per_burst + model.link_latency;
}

std::uint64_t sw_loop_cycles(const SwLoopModel& model, const std::vector<Descriptor>& ds) {
  if (!model.pipelined) {
    std::uint64_t total = 0;
    for (const auto& d : ds) total += model.setup_cycles + descriptor_data_cycles(model, d);
    return total;
  }
  // Host setup of descriptor i+1 overlaps the copy of descriptor i; the
  // engine streams back to back, paying the link latency once.
  std::uint64_t host = 0;
  std::uint64_t engine = 0;
  for (const auto& d : ds) {
    host += model.setup_cycles;
    const std::uint64_t busy = descriptor_data_cycles(model, d) - model.link_latency;
    engine = std::max(engine, host) + busy;
  }
  return ds.empty() ? 0 : engine + model.link_latency;
}

Metrics run_sw_loop(const SwLoopModel& model, const LayoutSpec& src, const LayoutSpec& dst, std::uint64_t m,
                    std::uint64_t n, unsigned word_bytes) {
  const auto tp = reshape_patterns(src, dst, m, n, kSrcBase, kDstBase, word_bytes);
  const auto ds = decompose(tp.src, tp.dst, model.descriptor_dims);
  const std::uint64_t bytes = m * n * src.elem_bytes;
  return make_metrics(sw_loop_cycles(model, ds), bytes, model.beat_bytes);
}

std::uint64_t accel_reshape_cycles(const ReshapeAccelModel& model, std::uint64_t bytes, bool transform) {
  if (bytes == 0) return 0;
  const Descriptor copy{kSrcBase, kDstBase, bytes, 1, 0, 0};
  std::uint64_t cycles = sw_loop_cycles(model.copy, {copy});
  if (transform) cycles += model.passes * ceil_div(ceil_div(bytes, model.word_bytes), model.words_per_cycle);
  return cycles;
}

Metrics run_accel_reshape(const ReshapeAccelModel& model, const LayoutSpec& src, const LayoutSpec& dst,
                          std::uint64_t m, std::uint64_t n) {
  const std::uint64_t bytes = m * n * src.elem_bytes;
  return make_metrics(accel_reshape_cycles(model, bytes, !(src == dst)), bytes, model.copy.beat_bytes);
}

}  // namespace xdma
