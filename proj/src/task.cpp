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

#include "xdma/task.hpp"

#include <limits>

namespace xdma {

namespace {

class Writer {
 public:
  void u8(std::uint64_t v) { put(v, 1); }
  void u16(std::uint64_t v) { put(v, 2); }
  void u32(std::uint64_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void bytes(const std::vector<std::uint8_t>& b) { out.insert(out.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> out;

 private:
  void put(std::uint64_t v, unsigned n) {
    for (unsigned i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  std::uint64_t get(unsigned n) {
    if (pos_ + n > b_.size()) throw ContractError("cfg encoding truncated");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < n; ++i) v |= std::uint64_t{b_[pos_ + i]} << (8 * i);
    pos_ += n;
    return v;
  }
  std::vector<std::uint8_t> take(std::size_t n) {
    if (pos_ + n > b_.size()) throw ContractError("cfg encoding truncated");
    std::vector<std::uint8_t> v(b_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                b_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return v;
  }
  bool at_end() const { return pos_ == b_.size(); }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

void encode_pattern(Writer& w, const AffinePattern& p) {
  if (p.bounds.size() != p.strides.size()) throw ContractError("pattern bounds and strides differ in length");
  if (p.dims() > kMaxCfgDims) throw ContractError("cfg exceeds the maximum encoded size: too many dimensions");
  w.u64(p.base);
  w.u8(p.dims());
  w.u8(p.word_bytes);
  w.u16(0);
  for (std::size_t d = 0; d < p.dims(); ++d) {
    if (p.bounds[d] > std::numeric_limits<std::uint32_t>::max()) throw ContractError("cfg bound exceeds 32 bits");
    if (p.strides[d] > std::numeric_limits<std::int32_t>::max() ||
        p.strides[d] < std::numeric_limits<std::int32_t>::min()) {
      throw ContractError("cfg stride exceeds 32 bits");
    }
    w.u32(p.bounds[d]);
    w.u32(static_cast<std::uint32_t>(static_cast<std::int32_t>(p.strides[d])));
  }
}

AffinePattern decode_pattern(Reader& r) {
  AffinePattern p;
  p.base = r.get(8);
  const auto dims = r.get(1);
  p.word_bytes = static_cast<unsigned>(r.get(1));
  r.get(2);
  for (std::uint64_t d = 0; d < dims; ++d) {
    p.bounds.push_back(r.get(4));
    p.strides.push_back(static_cast<std::int32_t>(static_cast<std::uint32_t>(r.get(4))));
  }
  return p;
}

}  // namespace

std::vector<std::uint8_t> encode_cfg(const XdmaCfg& cfg) {
  if (cfg.src_cluster > 0xFF || cfg.dst_cluster > 0xFF) throw ContractError("cfg cluster index exceeds 8 bits");
  if (cfg.reader_plugin_ctrl.size() > 15 || cfg.writer_plugin_ctrl.size() > 15) {
    throw ContractError("cfg exceeds the maximum encoded size: too many plugin control vectors");
  }
  Writer w;
  w.u32(cfg.task_id);
  w.u8(cfg.src_cluster);
  w.u8(cfg.dst_cluster);
  w.u8(kCfgWireVersion);
  w.u8(cfg.reader_plugin_ctrl.size() << 4 | cfg.writer_plugin_ctrl.size());
  encode_pattern(w, cfg.src_pattern);
  encode_pattern(w, cfg.dst_pattern);
  for (const auto* list : {&cfg.reader_plugin_ctrl, &cfg.writer_plugin_ctrl}) {
    for (const auto& c : *list) {
      if (c.bytes().size() > 0xFF) throw ContractError("cfg control vector longer than 255 bytes");
      w.u8(c.bytes().size());
      w.bytes(c.bytes());
    }
  }
  if (w.out.size() > kMaxCfgBytes) throw ContractError("cfg exceeds the maximum encoded size");
  return std::move(w.out);
}

XdmaCfg decode_cfg(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  XdmaCfg cfg;
  cfg.task_id = static_cast<TaskId>(r.get(4));
  cfg.src_cluster = static_cast<ClusterId>(r.get(1));
  cfg.dst_cluster = static_cast<ClusterId>(r.get(1));
  if (r.get(1) != kCfgWireVersion) throw ContractError("unsupported cfg wire version");
  const auto counts = r.get(1);
  cfg.src_pattern = decode_pattern(r);
  cfg.dst_pattern = decode_pattern(r);
  for (std::uint64_t i = 0; i < (counts >> 4); ++i) cfg.reader_plugin_ctrl.emplace_back(r.take(r.get(1)));
  for (std::uint64_t i = 0; i < (counts & 0xF); ++i) cfg.writer_plugin_ctrl.emplace_back(r.take(r.get(1)));
  if (!r.at_end()) throw ContractError("trailing bytes after cfg encoding");
  return cfg;
}

std::size_t beats_for_bytes(std::size_t bytes, unsigned beat_bytes) {
  return bytes == 0 ? 1 : (bytes + beat_bytes - 1) / beat_bytes;
}

}  // namespace xdma
