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

#include "xdma/interconnect.hpp"

namespace xdma {

std::string_view to_string(BeatKind kind) {
  switch (kind) {
    case BeatKind::Cfg:
      return "cfg";
    case BeatKind::Data:
      return "data";
    case BeatKind::Grant:
      return "grant";
    case BeatKind::Finish:
      return "finish";
  }
  return "?";
}

Link::Link(ClusterId from, ClusterId to, unsigned width_bits, unsigned latency, unsigned num_masters)
    : from_(from), to_(to), width_bits_(width_bits), latency_(latency), slots_(num_masters) {
  if (latency == 0) throw ContractError("link latency must be >= 1");
  if (num_masters == 0) throw ContractError("link needs at least one master");
}

bool Link::submit(unsigned master, Beat beat, Cycle now) {
  if (master >= slots_.size()) throw ContractError("link master id out of range");
  if (beat.payload.size() > width_bytes()) throw ContractError("beat payload wider than the link");
  if (slots_[master]) return false;
  slots_[master] = Slot{std::move(beat), now};
  return true;
}

std::optional<unsigned> Link::arbitrate(Cycle now) {
  std::optional<unsigned> pick;
  bool waiting = false;
  for (unsigned m = 0; m < slots_.size(); ++m) {
    if (!slots_[m]) continue;
    waiting = true;
    // Grants of the opposite tunnel are the one foreign beat a circuit lets
    // through; holding them would serialize the two directions.
    if (circuit_ && slots_[m]->beat.task_id != *circuit_ && slots_[m]->beat.kind != BeatKind::Grant) continue;
    if (!pick || slots_[m]->since < slots_[*pick]->since) pick = m;
  }
  if (!pick || pipe_.size() >= latency_) {
    if (waiting) ++stalled_cycles_;
    return std::nullopt;
  }
  Beat beat = std::move(slots_[*pick]->beat);
  slots_[*pick].reset();
  for (const auto& s : slots_) {
    if (s) {
      ++stalled_cycles_;
      break;
    }
  }

  if (beat.kind == BeatKind::Data && !circuit_) circuit_ = beat.task_id;
  if (beat.kind == BeatKind::Finish && circuit_ == beat.task_id) circuit_.reset();

  ++beats_sent_;
  if (beat.kind == BeatKind::Data) payload_bytes_ += beat.valid_bytes;
  if (observer_) observer_({now, from_, to_, beat.kind, beat.task_id, beat.valid_bytes});
  pipe_.push_back({std::move(beat), now + latency_});
  return pick;
}

void Link::reserve(TaskId task) {
  if (circuit_ && *circuit_ != task) throw SimulationFault("link already carries another task's circuit");
  circuit_ = task;
}

const Beat* Link::arrived(Cycle now) const {
  if (pipe_.empty() || pipe_.front().arrival > now) return nullptr;
  return &pipe_.front().beat;
}

Beat Link::pop_arrived() {
  if (pipe_.empty()) throw ContractError("pop from an empty link");
  Beat b = std::move(pipe_.front().beat);
  pipe_.pop_front();
  return b;
}

bool Link::idle() const {
  if (!pipe_.empty()) return false;
  for (const auto& s : slots_) {
    if (s) return false;
  }
  return true;
}

Fabric::Fabric(unsigned num_clusters, unsigned width_bits, unsigned latency, unsigned loopback_latency)
    : n_(num_clusters) {
  links_.reserve(std::size_t{n_} * n_);
  for (ClusterId f = 0; f < n_; ++f) {
    for (ClusterId t = 0; t < n_; ++t) links_.emplace_back(f, t, width_bits, f == t ? loopback_latency : latency, kNumMasters);
  }
}

bool Fabric::idle() const {
  for (const auto& l : links_) {
    if (!l.idle()) return false;
  }
  return true;
}

}  // namespace xdma
