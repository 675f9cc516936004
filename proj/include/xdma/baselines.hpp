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
#include <vector>

#include "xdma/config.hpp"
#include "xdma/metrics.hpp"
#include "xdma/pattern.hpp"

namespace xdma {

/// Software control loop driving a 1-D or 2-D DMA engine.
struct SwLoopModel {
  std::uint32_t setup_cycles = 160;    // per descriptor, host side
  std::uint32_t descriptor_dims = 2;   // 1 or 2
  bool pipelined = false;              // host programs the next descriptor while the engine copies
  std::uint32_t burst_overhead = 0;    // per 1-D burst
  std::uint32_t link_latency = 4;
  unsigned beat_bytes = 64;

  static SwLoopModel idma(const SocConfig& c);
  static SwLoopModel gemmini(const SocConfig& c);
};

/// Contiguous DMA copy followed by a standalone layout-transformation unit
/// working through an intermediate buffer.
struct ReshapeAccelModel {
  std::uint32_t words_per_cycle = 8;
  std::uint32_t passes = 2;
  unsigned word_bytes = 8;
  SwLoopModel copy;  // the single contiguous descriptor

  static ReshapeAccelModel from_config(const SocConfig& c);
};

/// One strided copy: `rows` bursts of `run_bytes`, advancing the source
/// and destination by their strides after every burst.
struct Descriptor {
  Addr src = 0;
  Addr dst = 0;
  std::uint64_t run_bytes = 0;
  std::uint64_t rows = 1;
  std::int64_t src_stride = 0;
  std::int64_t dst_stride = 0;

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

/// Splits a pair of equally long patterns (same stream order) into the
/// fewest descriptors of at most `dims` dimensions, greedily in stream
/// order. Bursts are the longest runs contiguous in both patterns.
std::vector<Descriptor> decompose(const AffinePattern& src, const AffinePattern& dst, unsigned dims);

/// Cycles the engine spends on one descriptor, excluding host setup.
std::uint64_t descriptor_data_cycles(const SwLoopModel& model, const Descriptor& d);
/// Total cycles for a descriptor list under the model's issue policy.
std::uint64_t sw_loop_cycles(const SwLoopModel& model, const std::vector<Descriptor>& ds);

Metrics run_sw_loop(const SwLoopModel& model, const LayoutSpec& src, const LayoutSpec& dst, std::uint64_t m,
                    std::uint64_t n, unsigned word_bytes = 8);
/// Contiguous copy of `bytes`, plus the transform passes when `transform`.
std::uint64_t accel_reshape_cycles(const ReshapeAccelModel& model, std::uint64_t bytes, bool transform);
Metrics run_accel_reshape(const ReshapeAccelModel& model, const LayoutSpec& src, const LayoutSpec& dst,
                          std::uint64_t m, std::uint64_t n);

}  // namespace xdma
