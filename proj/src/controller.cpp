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

#include "xdma/controller.hpp"

#include <map>
#include <sstream>
#include <string>

#include "xdma/plugin.hpp"

namespace xdma {

namespace {

void put_ctrls(CsrInstruction& instr, const std::vector<ControlBits>& ctrls, std::uint32_t data_reg,
               std::uint32_t len_reg) {
  for (std::size_t p = 0; p < ctrls.size(); ++p) {
    const auto& bytes = ctrls[p].bytes();
    for (std::size_t off = 0; off < bytes.size(); off += 4) {
      std::uint32_t v = 0;
      for (std::size_t k = 0; k < 4 && off + k < bytes.size(); ++k) v |= std::uint32_t{bytes[off + k]} << (8 * k);
      instr.writes.push_back({data_reg + static_cast<std::uint32_t>(p), v});
    }
    instr.writes.push_back({len_reg + static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(bytes.size())});
  }
}

void put_pattern(CsrInstruction& instr, const AffinePattern& p, std::uint32_t base_lo, std::uint32_t ndim,
                 std::uint32_t bound, std::uint32_t stride) {
  instr.writes.push_back({base_lo, static_cast<std::uint32_t>(p.base)});
  instr.writes.push_back({base_lo + 1, static_cast<std::uint32_t>(p.base >> 32)});
  instr.writes.push_back({ndim, static_cast<std::uint32_t>(p.dims())});
  for (std::size_t i = 0; i < p.dims(); ++i) {
    instr.writes.push_back({bound + static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(p.bounds[i])});
    instr.writes.push_back({stride + static_cast<std::uint32_t>(i),
                            static_cast<std::uint32_t>(static_cast<std::int32_t>(p.strides[i]))});
  }
}

std::string hex(Addr a) {
  std::ostringstream os;
  os << "0x" << std::hex << a;
  return os.str();
}

struct CtrlAccum {
  std::vector<std::uint8_t> bytes;
  std::optional<std::uint32_t> len;
};

}  // namespace

CsrInstruction encode_csr(const XdmaCfg& cfg) {
  if (cfg.src_pattern.dims() > csr::kMaxDims || cfg.dst_pattern.dims() > csr::kMaxDims) {
    throw ContractError("pattern has more dimensions than the CSR map holds");
  }
  if (cfg.reader_plugin_ctrl.size() > csr::kMaxPlugins || cfg.writer_plugin_ctrl.size() > csr::kMaxPlugins) {
    throw ContractError("more plugin control vectors than the CSR map holds");
  }
  CsrInstruction instr;
  put_pattern(instr, cfg.src_pattern, csr::kSrcBaseLo, csr::kSrcNdim, csr::kSrcBound, csr::kSrcStride);
  put_pattern(instr, cfg.dst_pattern, csr::kDstBaseLo, csr::kDstNdim, csr::kDstBound, csr::kDstStride);
  put_ctrls(instr, cfg.reader_plugin_ctrl, csr::kReaderCtrl, csr::kReaderCtrlLen);
  put_ctrls(instr, cfg.writer_plugin_ctrl, csr::kWriterCtrl, csr::kWriterCtrlLen);
  instr.writes.push_back({csr::kCommit, 1});
  return instr;
}

XdmaCfg decode(const CsrInstruction& instr, const SocConfig& config, TaskId task_id) {
  std::map<std::uint32_t, std::uint32_t> regs;
  std::map<std::uint32_t, CtrlAccum> reader_ctrl;
  std::map<std::uint32_t, CtrlAccum> writer_ctrl;
  bool committed = false;
  for (const auto& w : instr.writes) {
    if (committed) throw ContractError("register write after commit");
    const auto i = w.index;
    if (i == csr::kCommit) {
      committed = true;
    } else if (i >= csr::kReaderCtrl && i < csr::kReaderCtrl + csr::kMaxPlugins) {
      for (unsigned k = 0; k < 4; ++k) reader_ctrl[i - csr::kReaderCtrl].bytes.push_back(w.value >> (8 * k));
    } else if (i >= csr::kReaderCtrlLen && i < csr::kReaderCtrlLen + csr::kMaxPlugins) {
      reader_ctrl[i - csr::kReaderCtrlLen].len = w.value;
    } else if (i >= csr::kWriterCtrl && i < csr::kWriterCtrl + csr::kMaxPlugins) {
      for (unsigned k = 0; k < 4; ++k) writer_ctrl[i - csr::kWriterCtrl].bytes.push_back(w.value >> (8 * k));
    } else if (i >= csr::kWriterCtrlLen && i < csr::kWriterCtrlLen + csr::kMaxPlugins) {
      writer_ctrl[i - csr::kWriterCtrlLen].len = w.value;
    } else if (i <= csr::kDstNdim || (i >= csr::kSrcBound && i < csr::kDstStride + csr::kMaxDims)) {
      regs[i] = w.value;
    } else {
      throw ContractError("write to unknown CSR " + hex(i));
    }
  }
  if (!committed) throw ContractError("instruction not committed");

  auto need = [&](std::uint32_t idx, const std::string& name) {
    auto it = regs.find(idx);
    if (it == regs.end()) throw ContractError("missing field " + name);
    return it->second;
  };
  auto opt = [&](std::uint32_t idx) {
    auto it = regs.find(idx);
    return it == regs.end() ? 0u : it->second;
  };

  auto read_pattern = [&](const std::string& side, std::uint32_t base_lo, std::uint32_t ndim_reg, std::uint32_t bound,
                          std::uint32_t stride, std::uint32_t max_dims) {
    AffinePattern p;
    p.word_bytes = config.word_bytes();
    p.base = Addr{need(base_lo, side + "_base")} | (Addr{opt(base_lo + 1)} << 32);
    const auto ndim = need(ndim_reg, side + "_ndim");
    if (ndim > max_dims) {
      throw ContractError(side + " pattern has " + std::to_string(ndim) + " dimensions, Dim is " +
                          std::to_string(max_dims));
    }
    for (std::uint32_t d = 0; d < ndim; ++d) {
      p.bounds.push_back(need(bound + d, side + "_bound[" + std::to_string(d) + "]"));
      p.strides.push_back(static_cast<std::int32_t>(need(stride + d, side + "_stride[" + std::to_string(d) + "]")));
    }
    p.validate(max_dims);
    const auto cluster = config.cluster_of(p.base);
    if (!cluster) throw ContractError(side + " address " + hex(p.base) + " lies outside all clusters");
    p.validate_range(config.cluster_bases[*cluster], config.mem_size);
    return std::pair{p, *cluster};
  };

  XdmaCfg cfg;
  cfg.task_id = task_id;
  auto [src, src_cluster] = read_pattern("src", csr::kSrcBaseLo, csr::kSrcNdim, csr::kSrcBound, csr::kSrcStride,
                                         config.dim_src);
  auto [dst, dst_cluster] = read_pattern("dst", csr::kDstBaseLo, csr::kDstNdim, csr::kDstBound, csr::kDstStride,
                                         config.dim_dst);
  cfg.src_pattern = std::move(src);
  cfg.dst_pattern = std::move(dst);
  cfg.src_cluster = src_cluster;
  cfg.dst_cluster = dst_cluster;

  auto collect = [](std::map<std::uint32_t, CtrlAccum>& acc, std::size_t slots, const char* side) {
    std::vector<ControlBits> out;
    for (auto& [slot, c] : acc) {
      if (slot >= slots) throw ContractError(std::string(side) + " ctrl slot " + std::to_string(slot) + " has no plugin");
      if (c.len) {
        if (*c.len > c.bytes.size()) throw ContractError(std::string(side) + " ctrl length exceeds written data");
        c.bytes.resize(*c.len);
      }
      if (out.size() <= slot) out.resize(slot + 1);
      out[slot] = ControlBits(c.bytes);
    }
    return out;
  };
  cfg.reader_plugin_ctrl = collect(reader_ctrl, config.ext_src.size(), "reader");
  cfg.writer_plugin_ctrl = collect(writer_ctrl, config.ext_dst.size(), "writer");

  PluginChain reader(ChainStage::PostReader, config.ext_src);
  PluginChain writer(ChainStage::PreWriter, config.ext_dst);
  reader.configure(cfg.reader_plugin_ctrl, config.word_bytes());
  writer.configure(cfg.writer_plugin_ctrl, config.word_bytes());
  const auto produced = writer.output_words(reader.output_words(cfg.src_pattern.num_words()));
  if (produced != cfg.dst_pattern.num_words()) {
    throw ContractError("source side produces " + std::to_string(produced) + " words, destination consumes " +
                        std::to_string(cfg.dst_pattern.num_words()));
  }
  return cfg;
}

Route route(const XdmaCfg& cfg, const SocConfig& config, ClusterId controller) {
  const auto rc = config.cluster_of(cfg.src_pattern.base);
  const auto wc = config.cluster_of(cfg.dst_pattern.base);
  if (!rc) throw ContractError("source base " + hex(cfg.src_pattern.base) + " lies in no cluster's range");
  if (!wc) throw ContractError("destination base " + hex(cfg.dst_pattern.base) + " lies in no cluster's range");
  Route r;
  r.reader_cluster = *rc;
  r.writer_cluster = *wc;
  r.reader_local = *rc == controller;
  r.writer_local = *wc == controller;
  r.cfg_targets.push_back(*rc);
  if (*wc != *rc) r.cfg_targets.push_back(*wc);
  return r;
}

bool TaskFifo::push(XdmaCfg cfg) {
  if (full()) return false;
  queue_.push_back(std::move(cfg));
  return true;
}

std::optional<XdmaCfg> TaskFifo::dispatch_tick(bool consumer_idle) {
  if (!consumer_idle || queue_.empty()) return std::nullopt;
  XdmaCfg head = std::move(queue_.front());
  queue_.pop_front();
  return head;
}

// ---------------------------------------------------------------------------

Controller::Controller(ClusterId self, const SocConfig& config)
    : self_(self), config_(config), fifo_(config.task_fifo_depth) {}

std::optional<TaskId> Controller::submit(const CsrInstruction& instr) {
  if (fifo_.full()) {
    ++host_backpressure_;
    return std::nullopt;
  }
  const TaskId id = next_id();
  fifo_.push(decode(instr, config_, id));
  ++seq_;
  return id;
}

std::optional<TaskId> Controller::submit(XdmaCfg cfg) { return submit(encode_csr(cfg)); }

bool Controller::idle() const {
  return fifo_.empty() && pending_.empty() && (!last_link_ || last_link_->slot_free(kCfgMaster));
}

void Controller::tick(Cycle now, Fabric& fabric) {
  if (last_link_ && last_link_->slot_free(kCfgMaster)) last_link_ = nullptr;
  if (pending_.empty() && !last_link_) {
    if (auto task = fifo_.dispatch_tick(true)) {
      if (!first_issue_) first_issue_ = now;
      const Route r = route(*task, config_, self_);
      for (ClusterId target : r.cfg_targets) {
        for (auto& b : serialize_cfg(*task, config_.beat_bytes(), MmioMap::for_cluster(target).cfg)) {
          pending_.push_back({target, std::move(b)});
        }
      }
    }
  }
  if (!pending_.empty() && !last_link_) {
    Link& link = fabric.link(self_, pending_.front().target);
    if (link.submit(kCfgMaster, std::move(pending_.front().beat), now)) {
      pending_.pop_front();
      last_link_ = &link;
      ++cfg_beats_;
    }
  }
}

}  // namespace xdma
