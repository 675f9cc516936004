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
#include <deque>
#include <optional>
#include <vector>

#include "xdma/backend.hpp"
#include "xdma/config.hpp"
#include "xdma/interconnect.hpp"
#include "xdma/task.hpp"

namespace xdma {

// CSR map. Every register is 32 bits wide.
//
//   0x00 / 0x01        SRC_BASE low / high
//   0x02 / 0x03        DST_BASE low / high
//   0x04 / 0x05        SRC_NDIM / DST_NDIM
//   0x10 + i           SRC_BOUND[i]
//   0x20 + i           SRC_STRIDE[i]   (two's complement)
//   0x30 + i           DST_BOUND[i]
//   0x40 + i           DST_STRIDE[i]
//   0x50 + p           READER_CTRL[p]  each write appends 4 bytes
//   0x58 + p           READER_CTRL_LEN[p] in bytes (trims the appended bytes)
//   0x60 + p           WRITER_CTRL[p]
//   0x68 + p           WRITER_CTRL_LEN[p]
//   0x7F               COMMIT
namespace csr {
inline constexpr std::uint32_t kSrcBaseLo = 0x00;
inline constexpr std::uint32_t kSrcBaseHi = 0x01;
inline constexpr std::uint32_t kDstBaseLo = 0x02;
inline constexpr std::uint32_t kDstBaseHi = 0x03;
inline constexpr std::uint32_t kSrcNdim = 0x04;
inline constexpr std::uint32_t kDstNdim = 0x05;
inline constexpr std::uint32_t kSrcBound = 0x10;
inline constexpr std::uint32_t kSrcStride = 0x20;
inline constexpr std::uint32_t kDstBound = 0x30;
inline constexpr std::uint32_t kDstStride = 0x40;
inline constexpr std::uint32_t kReaderCtrl = 0x50;
inline constexpr std::uint32_t kReaderCtrlLen = 0x58;
inline constexpr std::uint32_t kWriterCtrl = 0x60;
inline constexpr std::uint32_t kWriterCtrlLen = 0x68;
inline constexpr std::uint32_t kCommit = 0x7F;
inline constexpr std::uint32_t kMaxDims = 16;
inline constexpr std::uint32_t kMaxPlugins = 8;
}  // namespace csr

struct CsrWrite {
  std::uint32_t index = 0;
  std::uint32_t value = 0;
};

/// Register writes describing one task, ending with a COMMIT write.
struct CsrInstruction {
  std::vector<CsrWrite> writes;
};

/// Host-side encoding of a task (task id and cluster fields are not encoded).
CsrInstruction encode_csr(const XdmaCfg& cfg);

/// Decodes a committed instruction into a validated cfg with id `task_id`.
/// Clusters are resolved from the base addresses. Throws ContractError for
/// incomplete fields, too many dimensions, addresses outside every cluster,
/// unknown plugin slots, or a source/destination size mismatch.
XdmaCfg decode(const CsrInstruction& instr, const SocConfig& config, TaskId task_id);

/// Where the two halves of a task go, seen from the issuing controller.
struct Route {
  ClusterId reader_cluster = 0;
  ClusterId writer_cluster = 0;
  bool reader_local = false;
  bool writer_local = false;
  /// Clusters that receive the cfg, reader side first, without duplicates.
  std::vector<ClusterId> cfg_targets;
};

/// Pure function of the base addresses and the cluster address map.
Route route(const XdmaCfg& cfg, const SocConfig& config, ClusterId controller);

/// Bounded in-order task queue.
class TaskFifo {
 public:
  explicit TaskFifo(std::size_t capacity) : capacity_(capacity) {}

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return queue_.size(); }
  bool empty() const { return queue_.empty(); }
  bool full() const { return queue_.size() >= capacity_; }

  /// Returns false when full; the caller keeps the task and retries.
  bool push(XdmaCfg cfg);
  const XdmaCfg& front() const { return queue_.front(); }

  /// Starts the head task if its consumer is idle. Never reorders.
  std::optional<XdmaCfg> dispatch_tick(bool consumer_idle);

 private:
  std::size_t capacity_;
  std::deque<XdmaCfg> queue_;
};

/// Controller of one cluster: host task FIFO plus a serial cfg router that
/// sends each task's cfg to the clusters owning its source and destination
/// memory. Local targets use the loopback path.
class Controller {
 public:
  Controller(ClusterId self, const SocConfig& config);

  ClusterId cluster() const { return self_; }

  /// Decodes and enqueues. Returns the task id, or nothing when the FIFO is
  /// full (host backpressure; no id is consumed).
  std::optional<TaskId> submit(const CsrInstruction& instr);
  /// Enqueues an already decoded cfg, assigning a fresh id.
  std::optional<TaskId> submit(XdmaCfg cfg);

  /// Routes the head task once the previous one's cfg beats have all left,
  /// and feeds cfg beats into the links.
  void tick(Cycle now, Fabric& fabric);

  bool idle() const;
  std::size_t queued() const { return fifo_.size(); }
  std::optional<Cycle> first_issue() const { return first_issue_; }
  std::uint64_t host_backpressure() const { return host_backpressure_; }
  std::uint64_t cfg_beats_sent() const { return cfg_beats_; }

 private:
  TaskId next_id() const { return (self_ << 24) | seq_; }

  ClusterId self_;
  SocConfig config_;
  TaskFifo fifo_;
  std::uint32_t seq_ = 0;
  struct Pending {
    ClusterId target;
    Beat beat;
  };
  std::deque<Pending> pending_;
  Link* last_link_ = nullptr;  // link holding the most recent cfg beat in its slot
  std::optional<Cycle> first_issue_;
  std::uint64_t host_backpressure_ = 0;
  std::uint64_t cfg_beats_ = 0;
};

}  // namespace xdma
