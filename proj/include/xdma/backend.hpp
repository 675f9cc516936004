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
#include <set>
#include <span>
#include <vector>

#include "xdma/config.hpp"
#include "xdma/frontend.hpp"
#include "xdma/interconnect.hpp"
#include "xdma/plugin.hpp"
#include "xdma/task.hpp"

namespace xdma {

/// MMIO addresses of one cluster's tunnel endpoint. Every message kind has
/// its own address so the receiver can dispatch on the write address alone.
struct MmioMap {
  Addr cfg = 0;
  Addr data = 0;
  Addr grant = 0;
  Addr finish = 0;

  static constexpr Addr kBase = 0xF000'0000;
  static constexpr Addr kStride = 0x1000;
  static MmioMap for_cluster(ClusterId c);
  Addr address_of(BeatKind kind) const;
};

/// Splits the wire encoding of `cfg` into cfg beats for `cfg_mmio`.
std::vector<Beat> serialize_cfg(const XdmaCfg& cfg, unsigned beat_bytes, Addr cfg_mmio);
XdmaCfg deserialize_cfg(std::span<const Beat> beats);

/// Grant and finish beats carry only the task id, zero-padded to a beat.
Beat make_control_beat(BeatKind kind, TaskId task, Addr mmio, unsigned beat_bytes);
Beat pack_data_beat(std::span<const Word> words, unsigned word_bytes, unsigned beat_bytes, TaskId task, Addr mmio);
std::vector<Word> unpack_data_beat(const Beat& beat, unsigned word_bytes);

/// Reassembles cfg beats arriving in order on one link.
class CfgAssembler {
 public:
  /// Returns the decoded cfg once its last beat arrived.
  std::optional<XdmaCfg> push(const Beat& beat);
  bool empty() const { return beats_.empty(); }

 private:
  std::vector<Beat> beats_;
};

enum class TunnelState { Idle, CfgSent, Granted, Streaming, Draining, Finished };

std::string_view to_string(TunnelState s);

/// Counters one endpoint accumulates over a run.
struct EndpointStats {
  std::uint64_t link_backpressure = 0;  // cycles a ready beat found its slot taken
  std::uint64_t data_beats = 0;
};

/// Source half of a tunnel endpoint: reader frontend, post-reader plugins
/// and the beat packer. Holds received source half-cfgs and grants, and
/// serves the oldest task that has both.
class ReaderEndpoint {
 public:
  ReaderEndpoint(ClusterId self, const SocConfig& config);

  ClusterId cluster() const { return self_; }
  TunnelState state() const { return state_; }
  std::optional<TaskId> active_task() const;

  void add_cfg(const XdmaCfg& cfg);
  /// A grant may arrive before the cfg it refers to; it is kept until then.
  void add_grant(TaskId task);

  /// Picks a task if idle, then moves words from the frontend through the
  /// plugins into beats and submits them (data, then finish).
  void tick(Cycle now, Fabric& fabric);

  Frontend& frontend() { return frontend_; }
  const EndpointStats& stats() const { return stats_; }
  bool idle() const;

 private:
  ClusterId self_;
  unsigned word_bytes_;
  unsigned beat_bytes_;
  unsigned words_per_beat_;
  Frontend frontend_;
  PluginChain chain_;
  std::vector<XdmaCfg> cfgs_;  // arrival order
  std::set<TaskId> grants_;
  std::optional<XdmaCfg> task_;
  std::vector<Word> staging_;
  bool stream_done_ = false;
  TunnelState state_ = TunnelState::Idle;
  EndpointStats stats_;
};

/// Record of one task as seen by its destination half.
struct WriterCompletion {
  TaskId task = 0;
  Cycle dispatched = 0;
  Cycle completed = 0;
  std::uint64_t bytes = 0;
};

/// Destination half: dispatches destination half-cfgs strictly in arrival
/// order, sends the grant, unpacks data beats through the pre-writer
/// plugins into the writer frontend, and completes on finish.
class WriterEndpoint {
 public:
  WriterEndpoint(ClusterId self, const SocConfig& config);

  ClusterId cluster() const { return self_; }
  TunnelState state() const { return state_; }
  std::optional<TaskId> active_task() const;
  std::size_t queued() const { return queue_.size(); }

  void add_cfg(const XdmaCfg& cfg);
  bool can_accept_data() const;
  void deliver(const Beat& beat);

  /// Dispatch and grant, then inbox -> plugins -> frontend buffer.
  void tick(Cycle now, Fabric& fabric);
  /// After the memory cycle: completes the task once everything is written.
  std::optional<WriterCompletion> retire(Cycle now);

  Frontend& frontend() { return frontend_; }
  const EndpointStats& stats() const { return stats_; }
  bool idle() const;

 private:
  ClusterId self_;
  unsigned word_bytes_;
  unsigned words_per_beat_;
  Frontend frontend_;
  PluginChain chain_;
  std::deque<XdmaCfg> queue_;
  std::optional<XdmaCfg> task_;
  std::deque<Word> inbox_;
  bool finish_received_ = false;
  Cycle dispatched_ = 0;
  TunnelState state_ = TunnelState::Idle;
  EndpointStats stats_;
};

}  // namespace xdma
