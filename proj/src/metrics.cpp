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

#include "xdma/metrics.hpp"

namespace xdma {

double compute_utilization(const Metrics& m) {
  if (m.cycles == 0) throw ContractError("utilization of a zero-cycle run");
  if (m.theoretical_bw <= 0.0) throw ContractError("utilization needs a positive link bandwidth");
  return static_cast<double>(m.bytes) / (static_cast<double>(m.cycles) * m.theoretical_bw);
}

Metrics make_metrics(Cycle cycles, std::uint64_t bytes, unsigned link_bytes_per_cycle, StallBreakdown stalls) {
  Metrics m;
  m.cycles = cycles;
  m.bytes = bytes;
  m.theoretical_bw = link_bytes_per_cycle;
  m.stalls = stalls;
  if (cycles > 0) {
    m.effective_bw = static_cast<double>(bytes) / static_cast<double>(cycles);
    m.utilization = compute_utilization(m);
  }
  return m;
}

}  // namespace xdma
