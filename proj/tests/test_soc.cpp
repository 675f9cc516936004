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

#include "support.hpp"
#include "xdma/harness.hpp"

using namespace xdma;
using namespace xdma::testing;

TEST_CASE("random task sets complete, verify and follow the protocol", "[soc][property]") {
  const SocConfig config = four_cluster_config();
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 60; ++i) {
    const auto tf = random_task_set(config, rng);
    INFO("set " << i << "\n" << serialize_task_file(tf));
    RunOptions o;
    o.record_links = true;
    o.seed = static_cast<std::uint64_t>(i);
    const auto r = run_transfer(config, tf, o);
    REQUIRE(r.verified);
    for (const auto& t : r.tasks) REQUIRE(t.completed);
    REQUIRE(check_protocol(r.link_events) == "");
  }
}

TEST_CASE("simulation is deterministic", "[soc][property]") {
  const SocConfig config = four_cluster_config();
  std::mt19937_64 rng(99);
  for (int i = 0; i < 10; ++i) {
    const auto tf = random_task_set(config, rng);
    RunOptions o;
    o.record_links = true;
    const auto a = run_transfer(config, tf, o);
    const auto b = run_transfer(config, tf, o);
    REQUIRE(a.metrics.cycles == b.metrics.cycles);
    REQUIRE(a.metrics.stalls == b.metrics.stalls);
    REQUIRE(a.link_events.size() == b.link_events.size());
    for (std::size_t k = 0; k < a.link_events.size(); ++k) {
      REQUIRE(a.link_events[k].cycle == b.link_events[k].cycle);
      REQUIRE(a.link_events[k].task_id == b.link_events[k].task_id);
    }
  }
}

TEST_CASE("protocol checker rejects broken traces", "[soc]") {
  const auto ev = [](Cycle c, ClusterId f, ClusterId t, BeatKind k, TaskId id) { return LinkEvent{c, f, t, k, id, 0}; };
  std::vector<LinkEvent> good{ev(0, 0, 1, BeatKind::Cfg, 1), ev(5, 1, 0, BeatKind::Grant, 1),
                              ev(10, 0, 1, BeatKind::Data, 1), ev(11, 0, 1, BeatKind::Finish, 1)};
  CHECK(check_protocol(good).empty());
  auto no_grant = good;
  no_grant.erase(no_grant.begin() + 1);
  CHECK_FALSE(check_protocol(no_grant).empty());
  auto data_after_finish = good;
  data_after_finish.push_back(ev(12, 0, 1, BeatKind::Data, 1));
  CHECK_FALSE(check_protocol(data_after_finish).empty());
  auto intruder = good;
  intruder.push_back(ev(7, 0, 1, BeatKind::Cfg, 2));
  CHECK_FALSE(check_protocol(intruder).empty());
  auto foreign_grant = good;
  foreign_grant.push_back(ev(8, 0, 1, BeatKind::Grant, 3));
  CHECK(check_protocol(foreign_grant).find("task 3") != std::string::npos);  // task 3 has no cfg
}

TEST_CASE("metrics window and ceiling", "[soc]") {
  const SocConfig config;
  Soc soc(config);
  XdmaCfg c;
  c.src_pattern = {config.cluster_bases[0], {1024}, {8}, 8};
  c.dst_pattern = {config.cluster_bases[1], {1024}, {8}, 8};
  soc.schedule(100, 0, c);
  soc.run(100000);
  const auto m = soc.metrics();
  CHECK(soc.tasks()[0].submitted == 100);
  CHECK(m.cycles == *soc.tasks()[0].completed - 100 + 1);
  CHECK(m.theoretical_bw == 64.0);
  CHECK(m.bytes == 8192);
  CHECK(soc.idle());
}
