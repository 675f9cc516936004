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
#include <span>
#include <vector>

#include "xdma/pattern.hpp"
#include "xdma/types.hpp"

namespace xdma {

/// One DMA task as decoded by a controller.
struct XdmaCfg {
  TaskId task_id = 0;
  ClusterId src_cluster = 0;
  ClusterId dst_cluster = 0;
  AffinePattern src_pattern;
  AffinePattern dst_pattern;
  std::vector<ControlBits> reader_plugin_ctrl;
  std::vector<ControlBits> writer_plugin_ctrl;

  friend bool operator==(const XdmaCfg&, const XdmaCfg&) = default;
};

// Cfg wire encoding, version 1. All fields little-endian.
//
//   off  size  field
//   0    4     task_id
//   4    1     src_cluster
//   5    1     dst_cluster
//   6    1     version (1)
//   7    1     reader ctrl count << 4 | writer ctrl count
//   8    ...   src pattern, then dst pattern:
//                u64 base, u8 ndims, u8 word_bytes, u16 reserved (0),
//                ndims x { u32 bound, i32 stride }
//   ...  ...   reader ctrl vectors, then writer ctrl vectors:
//                u8 length, length bytes
//
// A task with 1-D source and destination patterns and no control vectors
// encodes to 48 bytes.
inline constexpr std::uint8_t kCfgWireVersion = 1;
inline constexpr std::size_t kMaxCfgDims = 15;
inline constexpr std::size_t kMaxCfgBytes = 1024;

std::vector<std::uint8_t> encode_cfg(const XdmaCfg& cfg);
XdmaCfg decode_cfg(std::span<const std::uint8_t> bytes);

/// Beats needed to carry `bytes` bytes; zero bytes still occupy one beat.
std::size_t beats_for_bytes(std::size_t bytes, unsigned beat_bytes);

}  // namespace xdma
