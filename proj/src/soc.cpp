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

#include "xdma/soc.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace xdma {

Soc::Soc(SocConfig config)
    : config_(std::move(config)),
      fabric_((config_.validate(), config_.num_clusters()), config_.axi_width_bits, config_.axi_latency,
              config_.loopback_latency) {
  for (ClusterId c = 0; c < config_.num_clusters(); ++c) {
    memories_.emplace_back(config_.cluster_bases[c], config_.mem_size, config_.num_banks, config_.word_bytes());
    controllers_.emplace_back(c, config_);
    readers_.push_back(std::make_unique<ReaderEndpoint>(c, config_));
    writers_.push_back(std::make_unique<WriterEndpoint>(c, config_));
  }
  assemblers_.resize(fabric_.links().size());
  for (auto& link : fabric_.links()) {
    link.set_observer([this](const LinkEvent& e) { on_departure(e); });
  }
}

std::optional<TaskId> Soc::submit(ClusterId controller, const CsrInstruction& instr) {
  auto id = controllers_.at(controller).submit(instr);
  if (!id) return id;
  const XdmaCfg cfg = decode(instr, config_, *id);
  task_index_[*id] = tasks_.size();
  tasks_.push_back({*id, controller, cfg.src_cluster, cfg.dst_cluster, pattern_size(cfg.dst_pattern), now_, {}});
  last_submit_ = now_;
  return id;
}

std::optional<TaskId> Soc::submit(ClusterId controller, const XdmaCfg& cfg) {
  return submit(controller, encode_csr(cfg));
}

void Soc::schedule(Cycle at, ClusterId controller, XdmaCfg cfg) {
  if (controller >= controllers_.size()) throw ContractError("no controller " + std::to_string(controller));
  auto it = std::upper_bound(schedule_.begin(), schedule_.end(), at,
                             [](Cycle t, const Scheduled& s) { return t < s.at; });
  schedule_.insert(it, Scheduled{at, controller, std::move(cfg)});
}

void Soc::on_departure(const LinkEvent& e) {
  if (e.kind == BeatKind::Data && !first_data_) first_data_ = e.cycle;
  if (e.kind == BeatKind::Grant) fabric_.link(e.to, e.from).reserve(e.task_id);
  if (record_links_) link_events_.push_back(e);
  if (trace_) {
    *trace_ << "{\"cycle\":" << e.cycle << ",\"event\":\"link\",\"from\":" << e.from << ",\"to\":" << e.to
            << ",\"kind\":\"" << to_string(e.kind) << "\",\"task_id\":" << e.task_id
            << ",\"valid_bytes\":" << e.valid_bytes << "}\n";
  }
}

void Soc::deliver() {
  auto& links = fabric_.links();
  for (std::size_t li = 0; li < links.size(); ++li) {
    Link& link = links[li];
    const Beat* head = link.arrived(now_);
    if (!head) continue;
    const ClusterId to = link.to();
    if (head->dest_mmio != MmioMap::for_cluster(to).address_of(head->kind)) {
      throw SimulationFault("protocol violation: " + std::string(to_string(head->kind)) +
                            " beat written to the wrong MMIO address");
    }
    switch (head->kind) {
      case BeatKind::Cfg: {
        const Beat beat = link.pop_arrived();
        if (auto cfg = assemblers_[li].push(beat)) {
          bool used = false;
          if (cfg->src_cluster == to) {
            readers_[to]->add_cfg(*cfg);
            used = true;
          }
          if (cfg->dst_cluster == to) {
            writers_[to]->add_cfg(*cfg);
            used = true;
          }
          if (!used) throw SimulationFault("cfg routed to a cluster that owns neither half");
        }
        break;
      }
      case BeatKind::Grant:
        readers_[to]->add_grant(link.pop_arrived().task_id);
        break;
      case BeatKind::Data:
        if (writers_[to]->active_task() != head->task_id) {
          throw SimulationFault("protocol violation: data beat for task " + std::to_string(head->task_id) +
                                " outside its data phase");
        }
        if (!writers_[to]->can_accept_data()) {
          ++receiver_backpressure_;
          break;
        }
        writers_[to]->deliver(link.pop_arrived());
        break;
      case BeatKind::Finish:
        writers_[to]->deliver(link.pop_arrived());
        break;
    }
  }
}

void Soc::memory_cycle(ClusterId c) {
  Frontend& wr = writers_[c]->frontend();
  Frontend& rd = readers_[c]->frontend();
  if (!wr.busy() && !rd.busy()) return;
  scratch_.clear();
  wr.collect_requests(scratch_, 0);
  const std::size_t first_reader = scratch_.size();
  rd.collect_requests(scratch_, wr.channels());
  const auto res = memories_[c].issue_cycle(scratch_);
  const auto wrep = wr.apply_results(res, 0);
  const auto rrep = rd.apply_results(res, first_reader);
  stalls_.bank_conflict += wrep.conflicted + rrep.conflicted;
  stalls_.buffer_full += rrep.blocked;
  if (trace_) {
    auto emit = [&](const char* unit, const FrontendReport& r) {
      *trace_ << "{\"cycle\":" << now_ << ",\"event\":\"frontend\",\"unit\":\"" << unit << c
              << "\",\"issued\":" << r.issued << ",\"granted\":" << r.granted << ",\"conflicted\":" << r.conflicted
              << ",\"occupancy\":" << r.occupancy << "}\n";
    };
    if (wr.busy()) emit("writer", wrep);
    if (rd.busy()) emit("reader", rrep);
  }
}

void Soc::step() {
  while (!schedule_.empty() && schedule_.front().at <= now_) {
    auto& s = schedule_.front();
    if (!submit(s.controller, s.cfg)) break;  // FIFO full: retry next cycle, keep order
    schedule_.pop_front();
  }

  deliver();
  for (auto& ctl : controllers_) ctl.tick(now_, fabric_);
  for (auto& w : writers_) w->tick(now_, fabric_);
  for (auto& r : readers_) r->tick(now_, fabric_);
  for (ClusterId c = 0; c < memories_.size(); ++c) memory_cycle(c);
  for (auto& w : writers_) {
    if (auto done = w->retire(now_)) {
      tasks_.at(task_index_.at(done->task)).completed = now_;
      last_completion_ = now_;
    }
  }
  for (auto& link : fabric_.links()) link.arbitrate(now_);
  ++now_;
}

bool Soc::idle() const {
  if (!schedule_.empty() || !fabric_.idle()) return false;
  for (const auto& c : controllers_) {
    if (!c.idle()) return false;
  }
  for (const auto& r : readers_) {
    if (!r->idle()) return false;
  }
  for (const auto& w : writers_) {
    if (!w->idle()) return false;
  }
  for (const auto& a : assemblers_) {
    if (!a.empty()) return false;
  }
  return true;
}

void Soc::run(Cycle budget) {
  while (!idle()) {
    if (now_ >= budget) throw SimulationFault("cycle budget exceeded at cycle " + std::to_string(now_));
    step();
  }
}

Metrics Soc::metrics() const {
  std::optional<Cycle> first;
  for (const auto& c : controllers_) {
    if (c.first_issue() && (!first || *c.first_issue() < *first)) first = c.first_issue();
  }
  StallBreakdown s = stalls_;
  s.link_backpressure = receiver_backpressure_;
  for (const auto& r : readers_) s.link_backpressure += r->stats().link_backpressure;
  // The ceiling is one beat per cycle on every link direction the tasks use.
  std::uint64_t bytes = 0;
  std::set<std::pair<ClusterId, ClusterId>> directions;
  for (const auto& t : tasks_) {
    if (!t.completed) continue;
    bytes += t.bytes;
    directions.emplace(t.src_cluster, t.dst_cluster);
  }
  Cycle cycles = 0;
  if (first && last_completion_) {
    cycles = *last_completion_ - *first + 1;
    s.cfg_phase = (first_data_ ? *first_data_ : *last_completion_ + 1) - *first;
  }
  return make_metrics(cycles, bytes, config_.beat_bytes() * static_cast<unsigned>(std::max<std::size_t>(directions.size(), 1)), s);
}

}  // namespace xdma
