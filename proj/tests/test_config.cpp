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

#include "xdma/config.hpp"

using namespace xdma;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("default config is accepted", "[config]") {
  const SocConfig c = parse_config("{}");
  CHECK(c.mem_size == 4u * 1024 * 1024);
  CHECK(c.num_banks == 32);
  CHECK(c.bank_word_bits == 64);
  CHECK(c.axi_width_bits == 512);
  CHECK(c.words_per_beat() == 8);
  CHECK(c.beat_bytes() == 64);
  CHECK(c == SocConfig{});
  CHECK(load_config_file(XDMA_SOURCE_DIR "/configs/default.json") == c);
}

TEST_CASE("config invariants are named", "[config]") {
  CHECK_THROWS_WITH(parse_config(R"({"axi_width_bits": 100})"), ContainsSubstring("not a multiple"));
  CHECK_THROWS_WITH(parse_config(R"({"dbuf_src": 0})"), ContainsSubstring("buffer depth must be >= 1"));
  CHECK_THROWS_WITH(parse_config(R"({"nchan_dst": 0})"), ContainsSubstring("channel count must be >= 1"));
  CHECK_THROWS_WITH(parse_config(R"({"dim_src": 0})"), ContainsSubstring("dimension count must be >= 1"));
  CHECK_THROWS_WITH(parse_config(R"({"mem_size": 1000})"),
                    ContainsSubstring("mem_size not a multiple of num_banks * bank_word_bits/8"));
  CHECK_THROWS_WITH(parse_config(R"({"cluster_bases": [0, 4096]})"), ContainsSubstring("overlap"));
  CHECK_THROWS_WITH(parse_config(R"({"ext_src": ["memset"]})"), ContainsSubstring("pre-writer"));
  CHECK_THROWS_WITH(parse_config(R"({"ext_dst": ["nope"]})"), ContainsSubstring("unknown plugin"));
}

TEST_CASE("config schema violations", "[config]") {
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"num_banks": "many"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"num_banks": true})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"axi_latency": -1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"ext_src": "transpose"})"), ConfigError);
  CHECK(parse_config(R"({"mem_base_addr": "0x20000000", "cluster_bases": ["0x20000000", "0x20400000"]})")
            .cluster_bases[1] == 0x2040'0000);
  CHECK_THROWS_AS(parse_config(R"({"version": 7})"), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config serialization round-trips", "[config]") {
  SocConfig c;
  c.cluster_bases = {0x2000'0000, 0x3000'0000, 0x4000'0000};
  c.dbuf_src = 3;
  c.nchan_dst = 4;
  c.ext_src = {"identity", "transpose"};
  c.ext_dst = {"identity", "memset"};
  c.baselines.sw_pipelined = true;
  c.baselines.idma_setup_cycles = 7;
  CHECK(parse_config(serialize_config(c)) == c);
  CHECK(parse_config(serialize_config(SocConfig{})) == SocConfig{});
}

TEST_CASE("cluster_of maps addresses to clusters", "[config]") {
  const SocConfig c;
  CHECK(c.cluster_of(0x1000'0000) == 0u);
  CHECK(c.cluster_of(0x103F'FFFF) == 0u);
  CHECK(c.cluster_of(0x1040'0000) == 1u);
  CHECK_FALSE(c.cluster_of(0x1080'0000).has_value());
  CHECK_FALSE(c.cluster_of(0).has_value());
}

TEST_CASE("control bits pack little-endian", "[config]") {
  ControlBits b;
  b.set_field(0, 8, 0xAB);
  b.set_field(12, 8, 0x5C);
  CHECK(b.field(0, 8) == 0xAB);
  CHECK(b.field(12, 8) == 0x5C);
  CHECK(b.field(100, 8) == 0);
  CHECK(ControlBits::from_hex(b.to_hex()) == b);
  CHECK_THROWS_AS(ControlBits::from_hex("zz"), ConfigError);
}
