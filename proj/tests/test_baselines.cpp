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


#include <catch2/catch_amalgamated.hpp>

#include "xdma/baselines.hpp"
#include "xdma/harness.hpp"

using namespace xdma;

namespace {

const LayoutSpec kMN = LayoutSpec::row_major();
const LayoutSpec kT8 = LayoutSpec::tiled(8, 8);

}  // namespace

TEST_CASE("contiguous copy is one descriptor", "[baselines]") {
  const SocConfig c;
  const auto model = SwLoopModel::idma(c);
  const AffinePattern s{0, {8192}, {8}, 8};
  const AffinePattern d{1 << 20, {8192}, {8}, 8};
  const auto ds = decompose(s, d, 2);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].run_bytes == 65536);
  CHECK(sw_loop_cycles(model, ds) == c.baselines.idma_setup_cycles + 1024 + c.axi_latency);
  const auto m = run_sw_loop(model, kMN, kMN, 256, 256);
  CHECK(m.cycles == c.baselines.idma_setup_cycles + 1024 + c.axi_latency);
}

TEST_CASE("row-major to 8x8 tiles needs one 2-D descriptor per tile", "[baselines]") {
  const auto tp = reshape_patterns(kMN, kT8, 512, 512, 0, 1 << 20, 8);
  const auto ds = decompose(tp.src, tp.dst, 2);
  CHECK(ds.size() == 4096);
  for (const auto& d : ds) {
    REQUIRE(d.run_bytes == 8);
    REQUIRE(d.rows == 8);
  }
  CHECK(decompose(tp.src, tp.dst, 1).size() == 32768);
  CHECK_THROWS_AS(decompose(tp.src, tp.dst, 3), ContractError);
  CHECK_THROWS_AS(decompose(tp.src, AffinePattern{0, {3}, {8}, 8}, 2), ContractError);
}

TEST_CASE("free pipelined setup approaches the streaming rate", "[baselines]") {
  SocConfig c;
  c.baselines.idma_setup_cycles = 0;
  c.baselines.sw_pipelined = true;
  const auto sw = run_sw_loop(SwLoopModel::idma(c), kMN, kMN, 256, 256);
  TransferSpec t;
  t.kind = TransferKind::Copy;
  t.bytes = 65536;
  const auto hw = run_transfer(c, TaskFile{{t}}).metrics;
  CHECK(sw.utilization == Catch::Approx(hw.utilization).margin(0.015));
}

TEST_CASE("pipelined issue overlaps setup with copying", "[baselines]") {
  SwLoopModel m;
  m.setup_cycles = 10;
  m.link_latency = 4;
  const std::vector<Descriptor> ds(4, Descriptor{0, 0, 640, 1, 0, 0});
  CHECK(sw_loop_cycles(m, ds) == 4 * (10 + 10 + 4));
  m.pipelined = true;
  CHECK(sw_loop_cycles(m, ds) == 10 + 4 * 10 + 4);
  m.burst_overhead = 2;
  CHECK(descriptor_data_cycles(m, ds[0]) == 12 + 4);
  CHECK(sw_loop_cycles(m, {}) == 0);
}

TEST_CASE("reshape accelerator", "[baselines]") {
  const SocConfig c;
  const auto model = ReshapeAccelModel::from_config(c);
  CHECK(accel_reshape_cycles(model, 65536, true) - accel_reshape_cycles(model, 65536, false) == 2 * 1024);
  CHECK(accel_reshape_cycles(model, 0, true) == 0);
  CHECK(accel_reshape_cycles(model, 65536, false) == c.baselines.accel_copy_setup_cycles + 1024 + c.axi_latency);
  CHECK(run_accel_reshape(model, kMN, kMN, 256, 256).cycles == accel_reshape_cycles(model, 65536, false));
  CHECK(run_accel_reshape(model, kMN, kT8, 256, 256).cycles == accel_reshape_cycles(model, 65536, true));
}

TEST_CASE("baseline costs are monotone", "[baselines][property]") {
  for (const auto& [a, b] : {std::pair{kMN, kT8}, std::pair{kT8, LayoutSpec::tiled(8, 32)}}) {
    Cycle prev = 0;
    for (std::uint32_t setup : {0u, 12u, 40u, 160u, 400u}) {
      SocConfig c;
      c.baselines.idma_setup_cycles = setup;
      const auto m = run_sw_loop(SwLoopModel::idma(c), a, b, 128, 128);
      CHECK(m.cycles > prev);
      prev = m.cycles;
    }
    prev = 0;
    for (std::uint64_t n : {32u, 64u, 128u, 256u}) {
      const auto m = run_sw_loop(SwLoopModel::gemmini(SocConfig{}), a, b, n, n);
      CHECK(m.cycles > prev);
      CHECK(m.utilization > 0.0);
      CHECK(m.utilization <= 1.0);
      prev = m.cycles;
    }
  }
}
