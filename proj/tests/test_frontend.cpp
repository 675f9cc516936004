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

#include "xdma/frontend.hpp"

using namespace xdma;

namespace {

constexpr Addr kBase = 0x1000'0000;

BankedMemory filled_memory() {
  BankedMemory mem(kBase, 64 * 1024, 32, 8);
  for (Addr a = 0; a < 64 * 1024; a += 8) mem.write_word(kBase + a, a / 8);
  return mem;
}

AffinePattern contiguous(std::uint64_t words) { return {kBase, {words}, {8}, 8}; }

// Reads the whole pattern, draining one word per cycle at most `drain` words.
std::vector<Word> read_all(Frontend& fe, BankedMemory& mem, unsigned drain, Cycle* cycles = nullptr) {
  std::vector<Word> out;
  Cycle c = 0;
  while (!fe.finished()) {
    reader_tick(fe, mem);
    for (unsigned i = 0; i < drain && fe.can_pop(); ++i) out.push_back(fe.pop());
    ++c;
    REQUIRE(c < 100000);
  }
  if (cycles) *cycles = c;
  return out;
}

}  // namespace

TEST_CASE("stream buffer lanes", "[frontend]") {
  StreamBuffer b(2, 3);
  CHECK(b.capacity() == 6);
  b.push(0, 1);
  b.push(0, 2);
  b.push(1, 3);
  CHECK(b.occupancy() == 3);
  CHECK(b.pop(0) == 1);
  CHECK(b.pop(0) == 2);
  CHECK_THROWS_AS(b.pop(0), ContractError);
  b.push(1, 4);
  b.push(1, 5);
  CHECK(b.lane_full(1));
  CHECK_THROWS_AS(b.push(1, 6), ContractError);
  CHECK_THROWS_AS(StreamBuffer(0, 1), ContractError);
}

TEST_CASE("reader cycle", "[frontend]") {
  auto mem = filled_memory();
  SECTION("contiguous words hit distinct banks") {
    Frontend fe(FrontendRole::Reader, 8, 9, 4);
    fe.start(contiguous(64));
    const auto r = reader_tick(fe, mem);
    CHECK(r.issued == 8);
    CHECK(r.granted == 8);
    CHECK(r.occupancy == 8);
  }
  SECTION("a full buffer issues nothing") {
    Frontend fe(FrontendRole::Reader, 8, 1, 4);
    fe.start(contiguous(64));
    reader_tick(fe, mem);
    const auto r = reader_tick(fe, mem);
    CHECK(r.issued == 0);
    CHECK(r.blocked == 8);
    CHECK(r.occupancy == 8);
  }
  SECTION("same-bank words serialize") {
    Frontend fe(FrontendRole::Reader, 8, 9, 4);
    fe.start({kBase, {8}, {8 * 32}, 8});
    const auto r = reader_tick(fe, mem);
    CHECK(r.granted == 1);
    CHECK(r.conflicted == 7);
    CHECK(r.occupancy == 1);
  }
}

TEST_CASE("reader delivers words in pattern order", "[frontend]") {
  auto mem = filled_memory();
  const AffinePattern p{kBase, {4, 3, 5}, {8, 256, 24}, 8};
  Frontend fe(FrontendRole::Reader, 8, 3, 4);
  fe.start(p);
  const auto words = read_all(fe, mem, 1);
  REQUIRE(words.size() == p.num_words());
  for (std::uint64_t i = 0; i < words.size(); ++i) CHECK(words[i] == (p.address_at(i) - kBase) / 8);
  CHECK_THROWS_AS(fe.pop(), ContractError);
}

TEST_CASE("writer cycle", "[frontend]") {
  BankedMemory mem(kBase, 64 * 1024, 32, 8);
  SECTION("eight buffered words drain at once") {
    Frontend fe(FrontendRole::Writer, 8, 9, 4);
    fe.start(contiguous(8));
    for (Word w = 0; w < 8; ++w) fe.push(100 + w);
    const auto r = writer_tick(fe, mem);
    CHECK(r.granted == 8);
    CHECK(r.occupancy == 0);
    CHECK(fe.finished());
    for (Word w = 0; w < 8; ++w) CHECK(mem.read_word(kBase + 8 * w) == 100 + w);
  }
  SECTION("empty buffer idles") {
    Frontend fe(FrontendRole::Writer, 8, 9, 4);
    fe.start(contiguous(8));
    const auto r = writer_tick(fe, mem);
    CHECK(r.issued == 0);
    CHECK(r.granted == 0);
  }
  SECTION("two-way bank conflict sustains four words per cycle") {
    // Each group of eight stream words hits banks 0-3 twice.
    const AffinePattern p{kBase, {4, 64}, {8, 256}, 8};
    Frontend fe(FrontendRole::Writer, 8, 9, 4);
    fe.start(p);
    Cycle cycles = 0;
    Word next = 0;
    while (!fe.finished()) {
      while (fe.can_push()) fe.push(next++);
      writer_tick(fe, mem);
      ++cycles;
    }
    CHECK(cycles == 256 / 4);
    for (std::uint64_t i = 0; i < p.num_words(); ++i) CHECK(mem.read_word(p.address_at(i)) == i);
  }
  CHECK_THROWS_AS(writer_tick(*std::make_unique<Frontend>(FrontendRole::Reader, 1, 1, 1), mem), ContractError);
}

TEST_CASE("throughput is monotone in buffer depth", "[frontend][property]") {
  // Tiled-like strides that conflict in bursts; a deeper buffer absorbs more.
  const AffinePattern p{kBase, {8, 8, 4}, {64 * 8, 8, 8 * 8}, 8};
  Cycle prev = ~Cycle{0};
  for (unsigned d : {1u, 2u, 3u, 5u, 9u, 17u}) {
    auto mem = filled_memory();
    Frontend fe(FrontendRole::Reader, 8, d, 4);
    fe.start(p);
    Cycle cycles = 0;
    read_all(fe, mem, 8, &cycles);
    CHECK(cycles <= prev);
    prev = cycles;
  }
}

TEST_CASE("frontend rejects bad patterns", "[frontend]") {
  Frontend fe(FrontendRole::Reader, 8, 9, 2);
  CHECK_THROWS_AS(fe.start({kBase, {2, 2, 2}, {8, 16, 32}, 8}), ContractError);
  CHECK_THROWS_AS(fe.start({kBase + 4, {2}, {8}, 8}), ContractError);
}
