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
#include <string>
#include <string_view>
#include <vector>

#include "xdma/types.hpp"

namespace xdma {

inline constexpr int kConfigSchemaVersion = 1;

/// Cost-model constants for the software-loop and reshape-accelerator
/// reference systems. None of these are measured values; they are the knobs
/// the baseline models are calibrated with.
struct BaselineParams {
  std::uint32_t idma_setup_cycles = 160;
  std::uint32_t gemmini_setup_cycles = 12;
  std::uint32_t sw_descriptor_dims = 2;    // 1 or 2
  bool sw_pipelined = false;               // host/DMA overlap
  std::uint32_t sw_burst_overhead = 0;     // extra cycles per 1-D burst
  std::uint32_t accel_copy_setup_cycles = 40;  // the accelerator setup's single copy descriptor
  std::uint32_t reshape_words_per_cycle = 8;
  std::uint32_t reshape_passes = 2;        // intermediate write + read

  friend bool operator==(const BaselineParams&, const BaselineParams&) = default;
};

/// Design-time parameters of one SoC instance plus simulation knobs.
///
/// Every cluster owns one banked memory of `mem_size` bytes starting at
/// `cluster_bases[i]`, and one XDMA unit whose reader ("src") and writer
/// ("dst") frontends are sized by the *_src / *_dst fields.
struct SocConfig {
  std::vector<Addr> cluster_bases{0x1000'0000, 0x1040'0000};
  std::uint64_t mem_size = 4 * 1024 * 1024;
  std::uint32_t num_banks = 32;
  std::uint32_t bank_word_bits = 64;
  std::uint32_t axi_width_bits = 512;
  std::uint32_t axi_latency = 4;
  std::uint32_t loopback_latency = 1;
  std::uint32_t dim_src = 4;
  std::uint32_t dim_dst = 4;
  std::uint32_t dbuf_src = 9;
  std::uint32_t dbuf_dst = 9;
  std::uint32_t nchan_src = 8;
  std::uint32_t nchan_dst = 8;
  std::vector<std::string> ext_src{"transpose"};
  std::vector<std::string> ext_dst{"memset"};
  std::uint32_t task_fifo_depth = 8;
  BaselineParams baselines;

  std::uint32_t num_clusters() const { return static_cast<std::uint32_t>(cluster_bases.size()); }
  Addr mem_base_addr() const { return cluster_bases.front(); }
  unsigned word_bytes() const { return bank_word_bits / 8; }
  unsigned beat_bytes() const { return axi_width_bits / 8; }
  unsigned words_per_beat() const { return axi_width_bits / bank_word_bits; }

  /// Index of the cluster whose memory contains `addr`, if any.
  std::optional<ClusterId> cluster_of(Addr addr) const;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  friend bool operator==(const SocConfig&, const SocConfig&) = default;
};

/// Parses a JSON configuration document. Omitted fields keep their defaults;
/// present fields must have the documented type. The result is validated.
SocConfig parse_config(std::string_view text);
SocConfig load_config_file(const std::string& path);

/// Canonical JSON form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SocConfig& config);

}  // namespace xdma
