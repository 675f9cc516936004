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
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "xdma/types.hpp"

namespace xdma {

enum class BeatKind : std::uint8_t { Cfg, Data, Grant, Finish };

std::string_view to_string(BeatKind kind);

/// One write beat on a link. Data beats pack `valid_bytes` bytes of
/// frontend words in stream order; the rest of the payload is zero.
struct Beat {
  Addr dest_mmio = 0;
  BeatKind kind = BeatKind::Data;
  TaskId task_id = 0;
  std::vector<std::uint8_t> payload;
  unsigned valid_bytes = 0;
  bool last = true;  // cfg: final beat of the encoding
};

/// Departure record of one beat.
struct LinkEvent {
  Cycle cycle = 0;
  ClusterId from = 0;
  ClusterId to = 0;
  BeatKind kind = BeatKind::Data;
  TaskId task_id = 0;
  unsigned valid_bytes = 0;
};

/// One direction of a point-to-point write channel: a submission slot per
/// master, FCFS arbitration by submission cycle (lower master id wins ties),
/// at most one departure per cycle and a fixed-latency in-flight pipe.
///
/// The link is circuit switched for data: once a task is granted (or, for
/// a task nobody reserved for, at its first data beat) the link is locked to
/// it, and only that task's beats (and other tasks' grants) depart until its
/// finish beat has left.
class Link {
 public:
  Link(ClusterId from, ClusterId to, unsigned width_bits, unsigned latency, unsigned num_masters);

  ClusterId from() const { return from_; }
  ClusterId to() const { return to_; }
  unsigned latency() const { return latency_; }
  unsigned width_bytes() const { return width_bits_ / 8; }

  bool slot_free(unsigned master) const { return !slots_.at(master).has_value(); }
  /// Places `beat` in the master's slot. Returns false (backpressure) when
  /// the slot is still occupied.
  bool submit(unsigned master, Beat beat, Cycle now);

  /// Picks at most one slot and moves its beat into the pipe. Returns the
  /// master that departed.
  std::optional<unsigned> arbitrate(Cycle now);

  /// Head of the pipe if it has arrived by `now`.
  const Beat* arrived(Cycle now) const;
  Beat pop_arrived();

  bool idle() const;
  std::optional<TaskId> circuit() const { return circuit_; }
  /// Locks the link to `task` ahead of its first data beat. Called when the
  /// task's grant leaves on the opposite direction.
  void reserve(TaskId task);

  std::uint64_t beats_sent() const { return beats_sent_; }
  std::uint64_t payload_bytes() const { return payload_bytes_; }
  /// Cycles in which some slot held a beat that could not depart.
  std::uint64_t stalled_cycles() const { return stalled_cycles_; }

  void set_observer(std::function<void(const LinkEvent&)> observer) { observer_ = std::move(observer); }

 private:
  struct Slot {
    Beat beat;
    Cycle since = 0;
  };
  struct InFlight {
    Beat beat;
    Cycle arrival = 0;
  };

  ClusterId from_;
  ClusterId to_;
  unsigned width_bits_;
  unsigned latency_;
  std::vector<std::optional<Slot>> slots_;
  std::deque<InFlight> pipe_;
  std::optional<TaskId> circuit_;
  std::uint64_t beats_sent_ = 0;
  std::uint64_t payload_bytes_ = 0;
  std::uint64_t stalled_cycles_ = 0;
  std::function<void(const LinkEvent&)> observer_;
};

/// Master ids on every link.
inline constexpr unsigned kCfgMaster = 0;
inline constexpr unsigned kGrantMaster = 1;
inline constexpr unsigned kDataMaster = 2;
inline constexpr unsigned kNumMasters = 3;

/// All link directions of an SoC: one per ordered pair of distinct clusters
/// plus a loopback path per cluster for tasks local to it.
class Fabric {
 public:
  Fabric(unsigned num_clusters, unsigned width_bits, unsigned latency, unsigned loopback_latency);

  unsigned num_clusters() const { return n_; }
  Link& link(ClusterId from, ClusterId to) { return links_.at(std::size_t{from} * n_ + to); }
  const Link& link(ClusterId from, ClusterId to) const { return links_.at(std::size_t{from} * n_ + to); }
  std::vector<Link>& links() { return links_; }
  const std::vector<Link>& links() const { return links_; }
  bool idle() const;

 private:
  unsigned n_;
  std::vector<Link> links_;
};

}  // namespace xdma
