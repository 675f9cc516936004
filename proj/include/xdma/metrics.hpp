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

#include "xdma/types.hpp"

namespace xdma {

struct StallBreakdown {
  std::uint64_t bank_conflict = 0;      // conflicted bank requests
  std::uint64_t buffer_full = 0;        // reader lane-cycles blocked on a full buffer lane
  std::uint64_t link_backpressure = 0;  // cycles a ready beat could not enter or leave a link
  std::uint64_t cfg_phase = 0;          // cycles before the first data beat

  friend bool operator==(const StallBreakdown&, const StallBreakdown&) = default;
};

/// Timing of one run. `theoretical_bw` is the link width in bytes per cycle.
struct Metrics {
  Cycle cycles = 0;
  std::uint64_t bytes = 0;
  double effective_bw = 0.0;
  double theoretical_bw = 0.0;
  double utilization = 0.0;
  StallBreakdown stalls;
};

/// bytes / (cycles * theoretical_bw). Throws ContractError for zero cycles.
double compute_utilization(const Metrics& m);

/// Fills the derived fields from cycles, bytes and the link width.
Metrics make_metrics(Cycle cycles, std::uint64_t bytes, unsigned link_bytes_per_cycle, StallBreakdown stalls = {});

}  // namespace xdma
