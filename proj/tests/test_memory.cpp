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

#include <algorithm>
#include <cstdio>
#include <random>

#include "xdma/memory.hpp"

using namespace xdma;

namespace {

constexpr Addr kBase = 0x1000'0000;

BankedMemory make_memory() { return BankedMemory(kBase, 64 * 1024, 32, 8); }

}  // namespace

TEST_CASE("bank mapping is word-interleaved", "[memory]") {
  const auto mem = make_memory();
  CHECK(mem.bank_of(kBase) == 0);
  CHECK(mem.bank_of(kBase + 8) == 1);
  CHECK(mem.bank_of(kBase + 31 * 8) == 31);
  CHECK(mem.bank_of(kBase + 32 * 8) == 0);
}

TEST_CASE("bank arbitration", "[memory]") {
  auto mem = make_memory();
  SECTION("distinct banks are all granted") {
    const std::vector<BankRequest> reqs{{kBase, false, 0, 0}, {kBase + 8, false, 0, 1}};
    const auto r = mem.issue_cycle(reqs);
    CHECK(r.granted == std::vector<unsigned>{0, 1});
    CHECK(r.conflicted.empty());
  }
  SECTION("the lowest channel wins a bank") {
    const std::vector<BankRequest> reqs{{kBase, false, 0, 0}, {kBase + 256, false, 0, 1}};
    const auto r = mem.issue_cycle(reqs);
    CHECK(r.granted == std::vector<unsigned>{0});
    CHECK(r.conflicted == std::vector<unsigned>{1});
  }
  SECTION("eight requests to one bank") {
    std::vector<BankRequest> reqs;
    for (unsigned c = 0; c < 8; ++c) reqs.push_back({kBase + c * 8 * 32, false, 0, c});
    const auto r = mem.issue_cycle(reqs);
    CHECK(r.granted.size() == 1);
    CHECK(r.conflicted.size() == 7);
    CHECK(mem.conflicted_accesses() == 7);
  }
  SECTION("granted writes commit, reads return data") {
    mem.write_word(kBase + 16, 0x1122334455667788);
    const std::vector<BankRequest> reqs{{kBase + 16, false, 0, 0}, {kBase + 24, true, 0xABCD, 1}};
    const auto r = mem.issue_cycle(reqs);
    CHECK(r.read_data[0] == 0x1122334455667788);
    CHECK(mem.read_word(kBase + 24) == 0xABCD);
  }
  SECTION("conflicted writes do not commit") {
    const std::vector<BankRequest> reqs{{kBase, true, 1, 0}, {kBase + 256, true, 2, 1}};
    mem.issue_cycle(reqs);
    CHECK(mem.read_word(kBase) == 1);
    CHECK(mem.read_word(kBase + 256) == 0);
  }
}

TEST_CASE("granted and conflicted partition the requests", "[memory][property]") {
  auto mem = make_memory();
  std::mt19937_64 rng(5);
  for (int round = 0; round < 2000; ++round) {
    std::vector<BankRequest> reqs;
    const unsigned n = 1 + rng() % 16;
    for (unsigned c = 0; c < n; ++c) reqs.push_back({kBase + (rng() % 8192) * 8, (rng() & 1) != 0, rng(), c});
    const auto r = mem.issue_cycle(reqs);
    REQUIRE(r.granted.size() + r.conflicted.size() == n);
    std::vector<int> per_bank(32, 0);
    for (std::size_t i = 0; i < reqs.size(); ++i) {
      if (r.request_granted[i]) ++per_bank[mem.bank_of(reqs[i].addr)];
    }
    REQUIRE(*std::max_element(per_bank.begin(), per_bank.end()) <= 1);
    // Every conflicted request lost to a lower channel on its bank.
    for (std::size_t i = 0; i < reqs.size(); ++i) {
      if (r.request_granted[i]) continue;
      bool lost = false;
      for (std::size_t j = 0; j < i; ++j) {
        lost = lost || (r.request_granted[j] && mem.bank_of(reqs[j].addr) == mem.bank_of(reqs[i].addr));
      }
      REQUIRE(lost);
    }
  }
}

TEST_CASE("backdoor access", "[memory]") {
  auto mem = make_memory();
  const std::vector<std::uint8_t> bytes{1, 2, 3, 4};
  mem.backdoor_write(kBase, bytes);
  CHECK(mem.backdoor_read(kBase, 4) == bytes);
  CHECK(mem.backdoor_read(kBase + 100, 8) == std::vector<std::uint8_t>(8, 0));

  std::vector<std::uint8_t> wide(300);
  for (std::size_t i = 0; i < wide.size(); ++i) wide[i] = static_cast<std::uint8_t>(i * 7);
  mem.backdoor_write(kBase + 250, wide);  // crosses many banks
  CHECK(mem.backdoor_read(kBase + 250, wide.size()) == wide);
  CHECK(mem.read_word(kBase) == 0x04030201);  // little-endian packing
}

TEST_CASE("memory images round-trip through files", "[memory]") {
  auto mem = make_memory();
  std::vector<std::uint8_t> bytes(128);
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = static_cast<std::uint8_t>(255 - i);
  mem.backdoor_write(kBase + 64, bytes);
  const std::string path = "memory_image_test.bin";
  mem.dump_image(path, kBase + 64, bytes.size());
  auto other = make_memory();
  other.load_image(path, kBase + 1024);
  CHECK(other.backdoor_read(kBase + 1024, bytes.size()) == bytes);
  std::remove(path.c_str());
}

TEST_CASE("memory faults", "[memory]") {
  auto mem = make_memory();
  const std::vector<BankRequest> misaligned{{kBase + 4, false, 0, 0}};
  CHECK_THROWS_AS(mem.issue_cycle(misaligned), SimulationFault);
  const std::vector<BankRequest> outside{{kBase + 64 * 1024, false, 0, 0}};
  CHECK_THROWS_AS(mem.issue_cycle(outside), SimulationFault);
  const std::vector<BankRequest> below{{kBase - 8, false, 0, 0}};
  CHECK_THROWS_AS(mem.issue_cycle(below), SimulationFault);
  CHECK_THROWS_AS(mem.backdoor_read(kBase + 64 * 1024 - 4, 8), SimulationFault);
  CHECK_THROWS_AS(BankedMemory(0, 1000, 32, 8), ContractError);
}
