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
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "xdma/backend.hpp"
#include "xdma/config.hpp"
#include "xdma/controller.hpp"
#include "xdma/interconnect.hpp"
#include "xdma/memory.hpp"
#include "xdma/metrics.hpp"

namespace xdma {

struct TaskRecord {
  TaskId id = 0;
  ClusterId controller = 0;
  ClusterId src_cluster = 0;
  ClusterId dst_cluster = 0;
  std::uint64_t bytes = 0;
  Cycle submitted = 0;
  std::optional<Cycle> completed;
};

/// A whole SoC: per cluster one banked memory, one controller, and one
/// XDMA unit (reader and writer endpoint), joined by a link fabric.
///
/// One call to step() advances every component by one cycle in a fixed
/// order: link deliveries, controllers, writer then reader endpoints, the
/// bank arbitration of each memory, writer retirement, link arbitration.
class Soc {
 public:
  explicit Soc(SocConfig config);
  Soc(const Soc&) = delete;
  Soc& operator=(const Soc&) = delete;

  const SocConfig& config() const { return config_; }
  Cycle now() const { return now_; }
  BankedMemory& memory(ClusterId c) { return memories_.at(c); }
  const BankedMemory& memory(ClusterId c) const { return memories_.at(c); }
  Fabric& fabric() { return fabric_; }

  /// Host submission between cycles. Returns nothing when the controller's
  /// task FIFO is full.
  std::optional<TaskId> submit(ClusterId controller, const XdmaCfg& cfg);
  std::optional<TaskId> submit(ClusterId controller, const CsrInstruction& instr);
  /// Submits at cycle `at`, retrying every cycle while the FIFO is full.
  void schedule(Cycle at, ClusterId controller, XdmaCfg cfg);

  void step();
  bool idle() const;
  /// Steps until idle. Throws SimulationFault once `now` reaches `budget`.
  void run(Cycle budget);

  /// Window from the first cfg issue to the last destination write.
  /// Utilization is against one beat per cycle on each link direction used.
  Metrics metrics() const;
  const std::vector<TaskRecord>& tasks() const { return tasks_; }
  std::optional<Cycle> last_submit() const { return last_submit_; }

  /// Beat departures, recorded when enabled before the run.
  void record_link_events(bool on) { record_links_ = on; }
  const std::vector<LinkEvent>& link_events() const { return link_events_; }

  /// JSON-lines trace of frontend cycles and link departures.
  void set_trace(std::ostream* os) { trace_ = os; }

 private:
  void deliver();
  void memory_cycle(ClusterId c);
  void on_departure(const LinkEvent& e);

  SocConfig config_;
  Cycle now_ = 0;
  std::vector<BankedMemory> memories_;
  Fabric fabric_;
  std::vector<Controller> controllers_;
  std::vector<std::unique_ptr<ReaderEndpoint>> readers_;
  std::vector<std::unique_ptr<WriterEndpoint>> writers_;
  std::vector<CfgAssembler> assemblers_;  // one per link

  struct Scheduled {
    Cycle at;
    ClusterId controller;
    XdmaCfg cfg;
  };
  std::deque<Scheduled> schedule_;  // sorted by `at`, stable
  std::vector<TaskRecord> tasks_;
  std::map<TaskId, std::size_t> task_index_;
  std::optional<Cycle> last_submit_;
  std::optional<Cycle> last_completion_;
  std::optional<Cycle> first_data_;

  StallBreakdown stalls_;
  std::uint64_t receiver_backpressure_ = 0;
  bool record_links_ = false;
  std::vector<LinkEvent> link_events_;
  std::ostream* trace_ = nullptr;
  std::vector<BankRequest> scratch_;
};

}  // namespace xdma
