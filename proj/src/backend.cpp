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

#include "xdma/backend.hpp"

#include <algorithm>
#include <string>

namespace xdma {

MmioMap MmioMap::for_cluster(ClusterId c) {
  const Addr base = kBase + Addr{c} * kStride;
  return {base + 0x00, base + 0x40, base + 0x80, base + 0xC0};
}

Addr MmioMap::address_of(BeatKind kind) const {
  switch (kind) {
    case BeatKind::Cfg:
      return cfg;
    case BeatKind::Data:
      return data;
    case BeatKind::Grant:
      return grant;
    case BeatKind::Finish:
      return finish;
  }
  return 0;
}

std::vector<Beat> serialize_cfg(const XdmaCfg& cfg, unsigned beat_bytes, Addr cfg_mmio) {
  const auto bytes = encode_cfg(cfg);
  const std::size_t n = beats_for_bytes(bytes.size(), beat_bytes);
  std::vector<Beat> beats;
  beats.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Beat b;
    b.dest_mmio = cfg_mmio;
    b.kind = BeatKind::Cfg;
    b.task_id = cfg.task_id;
    b.payload.assign(beat_bytes, 0);
    const std::size_t off = i * beat_bytes;
    const std::size_t len = std::min<std::size_t>(beat_bytes, bytes.size() - off);
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(off), len, b.payload.begin());
    b.valid_bytes = static_cast<unsigned>(len);
    b.last = i + 1 == n;
    beats.push_back(std::move(b));
  }
  return beats;
}

XdmaCfg deserialize_cfg(std::span<const Beat> beats) {
  std::vector<std::uint8_t> bytes;
  for (const auto& b : beats) {
    if (b.kind != BeatKind::Cfg) throw SimulationFault("non-cfg beat inside a cfg transfer");
    bytes.insert(bytes.end(), b.payload.begin(), b.payload.begin() + b.valid_bytes);
  }
  return decode_cfg(bytes);
}

Beat make_control_beat(BeatKind kind, TaskId task, Addr mmio, unsigned beat_bytes) {
  Beat b;
  b.dest_mmio = mmio;
  b.kind = kind;
  b.task_id = task;
  b.payload.assign(beat_bytes, 0);
  for (unsigned i = 0; i < 4 && i < beat_bytes; ++i) b.payload[i] = static_cast<std::uint8_t>(task >> (8 * i));
  b.valid_bytes = std::min(4u, beat_bytes);
  return b;
}

Beat pack_data_beat(std::span<const Word> words, unsigned word_bytes, unsigned beat_bytes, TaskId task, Addr mmio) {
  if (words.size() * word_bytes > beat_bytes) throw ContractError("too many words for one beat");
  Beat b;
  b.dest_mmio = mmio;
  b.kind = BeatKind::Data;
  b.task_id = task;
  b.payload.assign(beat_bytes, 0);
  for (std::size_t i = 0; i < words.size(); ++i) word_to_bytes(words[i], b.payload.data() + i * word_bytes, word_bytes);
  b.valid_bytes = static_cast<unsigned>(words.size() * word_bytes);
  return b;
}

std::vector<Word> unpack_data_beat(const Beat& beat, unsigned word_bytes) {
  if (beat.valid_bytes % word_bytes != 0) throw SimulationFault("data beat carries a partial word");
  std::vector<Word> words(beat.valid_bytes / word_bytes);
  for (std::size_t i = 0; i < words.size(); ++i) words[i] = word_from_bytes(beat.payload.data() + i * word_bytes, word_bytes);
  return words;
}

std::optional<XdmaCfg> CfgAssembler::push(const Beat& beat) {
  if (!beats_.empty() && beats_.front().task_id != beat.task_id) {
    throw SimulationFault("cfg beats of two tasks interleaved on one link");
  }
  beats_.push_back(beat);
  if (!beat.last) return std::nullopt;
  auto cfg = deserialize_cfg(beats_);
  beats_.clear();
  return cfg;
}

std::string_view to_string(TunnelState s) {
  switch (s) {
    case TunnelState::Idle:
      return "idle";
    case TunnelState::CfgSent:
      return "cfg_sent";
    case TunnelState::Granted:
      return "granted";
    case TunnelState::Streaming:
      return "streaming";
    case TunnelState::Draining:
      return "draining";
    case TunnelState::Finished:
      return "finished";
  }
  return "?";
}

// ---------------------------------------------------------------------------

ReaderEndpoint::ReaderEndpoint(ClusterId self, const SocConfig& config)
    : self_(self),
      word_bytes_(config.word_bytes()),
      beat_bytes_(config.beat_bytes()),
      words_per_beat_(config.words_per_beat()),
      frontend_(FrontendRole::Reader, config.nchan_src, config.dbuf_src, config.dim_src),
      chain_(ChainStage::PostReader, config.ext_src) {}

std::optional<TaskId> ReaderEndpoint::active_task() const {
  if (!task_) return std::nullopt;
  return task_->task_id;
}

void ReaderEndpoint::add_cfg(const XdmaCfg& cfg) {
  if (cfg.src_cluster != self_) throw SimulationFault("source half-cfg delivered to the wrong cluster");
  cfgs_.push_back(cfg);
}

void ReaderEndpoint::add_grant(TaskId task) {
  if (!grants_.insert(task).second) throw SimulationFault("duplicate grant for task " + std::to_string(task));
}

bool ReaderEndpoint::idle() const { return !task_ && cfgs_.empty() && grants_.empty(); }

void ReaderEndpoint::tick(Cycle now, Fabric& fabric) {
  if (!task_) {
    auto it = std::find_if(cfgs_.begin(), cfgs_.end(), [&](const XdmaCfg& c) { return grants_.count(c.task_id) > 0; });
    if (it == cfgs_.end()) return;
    task_ = std::move(*it);
    cfgs_.erase(it);
    grants_.erase(task_->task_id);
    frontend_.start(task_->src_pattern);
    chain_.configure(task_->reader_plugin_ctrl, word_bytes_);
    staging_.clear();
    stream_done_ = false;
    state_ = TunnelState::Granted;
  }

  for (unsigned s = 0; s < words_per_beat_ && staging_.size() < words_per_beat_; ++s) {
    std::optional<Word> in;
    if (frontend_.can_pop()) in = frontend_.peek();
    const auto r = chain_.step(in, true);
    if (r.consumed) frontend_.pop();
    if (r.out) staging_.push_back(*r.out);
    if (!r.consumed && !r.out) break;
  }
  if (!stream_done_ && frontend_.words_popped() == frontend_.total_words() && !chain_.holds_data()) {
    chain_.end_of_stream();
    stream_done_ = true;
  }

  Link& link = fabric.link(self_, task_->dst_cluster);
  const auto mmio = MmioMap::for_cluster(task_->dst_cluster);
  if (!staging_.empty() && (staging_.size() == words_per_beat_ || stream_done_)) {
    if (!link.slot_free(kDataMaster)) {
      ++stats_.link_backpressure;
      return;
    }
    link.submit(kDataMaster, pack_data_beat(staging_, word_bytes_, beat_bytes_, task_->task_id, mmio.data), now);
    staging_.clear();
    ++stats_.data_beats;
    state_ = TunnelState::Streaming;
  } else if (stream_done_ && staging_.empty()) {
    if (!link.slot_free(kDataMaster)) {
      ++stats_.link_backpressure;
      return;
    }
    link.submit(kDataMaster, make_control_beat(BeatKind::Finish, task_->task_id, mmio.finish, beat_bytes_), now);
    frontend_.release();
    task_.reset();
    state_ = TunnelState::Idle;
  }
}

// ---------------------------------------------------------------------------

WriterEndpoint::WriterEndpoint(ClusterId self, const SocConfig& config)
    : self_(self),
      word_bytes_(config.word_bytes()),
      words_per_beat_(config.words_per_beat()),
      frontend_(FrontendRole::Writer, config.nchan_dst, config.dbuf_dst, config.dim_dst),
      chain_(ChainStage::PreWriter, config.ext_dst) {}

std::optional<TaskId> WriterEndpoint::active_task() const {
  if (!task_) return std::nullopt;
  return task_->task_id;
}

void WriterEndpoint::add_cfg(const XdmaCfg& cfg) {
  if (cfg.dst_cluster != self_) throw SimulationFault("destination half-cfg delivered to the wrong cluster");
  queue_.push_back(cfg);
}

bool WriterEndpoint::can_accept_data() const {
  return task_ && !finish_received_ && inbox_.size() + words_per_beat_ <= 2 * std::size_t{words_per_beat_};
}

void WriterEndpoint::deliver(const Beat& beat) {
  const bool ours = task_ && task_->task_id == beat.task_id;
  switch (beat.kind) {
    case BeatKind::Data: {
      if (!ours || finish_received_) {
        throw SimulationFault("protocol violation: data beat for task " + std::to_string(beat.task_id) +
                              " outside its data phase");
      }
      for (Word w : unpack_data_beat(beat, word_bytes_)) inbox_.push_back(w);
      ++stats_.data_beats;
      state_ = TunnelState::Streaming;
      break;
    }
    case BeatKind::Finish:
      if (!ours || finish_received_) {
        throw SimulationFault("protocol violation: unexpected finish for task " + std::to_string(beat.task_id));
      }
      finish_received_ = true;
      state_ = TunnelState::Draining;
      break;
    default:
      throw SimulationFault("protocol violation: writer endpoint received a " + std::string(to_string(beat.kind)) +
                            " beat");
  }
}

bool WriterEndpoint::idle() const { return !task_ && queue_.empty(); }

void WriterEndpoint::tick(Cycle now, Fabric& fabric) {
  if (!task_ && !queue_.empty()) {
    const XdmaCfg& next = queue_.front();
    Link& link = fabric.link(self_, next.src_cluster);
    if (link.slot_free(kGrantMaster)) {
      task_ = std::move(queue_.front());
      queue_.pop_front();
      frontend_.start(task_->dst_pattern);
      chain_.configure(task_->writer_plugin_ctrl, word_bytes_);
      inbox_.clear();
      finish_received_ = false;
      dispatched_ = now;
      link.submit(kGrantMaster,
                  make_control_beat(BeatKind::Grant, task_->task_id, MmioMap::for_cluster(task_->src_cluster).grant,
                                    link.width_bytes()),
                  now);
      state_ = TunnelState::Granted;
    }
  }
  if (!task_) return;

  for (unsigned s = 0; s < words_per_beat_; ++s) {
    std::optional<Word> in;
    if (!inbox_.empty()) in = inbox_.front();
    const auto r = chain_.step(in, frontend_.can_push());
    if (r.consumed) inbox_.pop_front();
    if (r.out) frontend_.push(*r.out);
    if (!r.consumed && !r.out) break;
  }
}

std::optional<WriterCompletion> WriterEndpoint::retire(Cycle now) {
  if (!task_ || !finish_received_ || !inbox_.empty() || chain_.holds_data() || !frontend_.finished()) {
    return std::nullopt;
  }
  chain_.end_of_stream();
  WriterCompletion done{task_->task_id, dispatched_, now, pattern_size(task_->dst_pattern)};
  frontend_.release();
  task_.reset();
  state_ = TunnelState::Idle;
  return done;
}

}  // namespace xdma
