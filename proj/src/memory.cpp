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

#include "xdma/memory.hpp"

#include <fstream>
#include <sstream>

namespace xdma {

namespace {

std::string hex_addr(Addr a) {
  std::ostringstream os;
  os << "0x" << std::hex << a;
  return os.str();
}

}  // namespace

BankedMemory::BankedMemory(Addr base, std::uint64_t size, unsigned num_banks, unsigned word_bytes)
    : base_(base), num_banks_(num_banks), word_bytes_(word_bytes), storage_(size, 0), owner_(num_banks, -1) {
  if (num_banks == 0 || word_bytes == 0 || word_bytes > kMaxWordBytes) {
    throw ContractError("invalid bank geometry");
  }
  if (size % (std::uint64_t{num_banks} * word_bytes) != 0) {
    throw ContractError("memory size not a multiple of the bank stripe");
  }
}

void BankedMemory::check_word(Addr addr) const {
  if (addr % word_bytes_ != 0) throw SimulationFault("misaligned bank access at " + hex_addr(addr));
  if (!contains(addr, word_bytes_)) throw SimulationFault("bank access out of range at " + hex_addr(addr));
}

IssueResult BankedMemory::issue_cycle(std::span<const BankRequest> requests) {
  IssueResult r;
  r.request_granted.assign(requests.size(), false);
  r.read_data.assign(requests.size(), 0);
  for (std::size_t i = 0; i < requests.size(); ++i) {
    check_word(requests[i].addr);
    const unsigned bank = bank_of(requests[i].addr);
    const int cur = owner_[bank];
    if (cur < 0 || requests[i].channel < requests[static_cast<std::size_t>(cur)].channel) {
      owner_[bank] = static_cast<int>(i);
    }
  }
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& q = requests[i];
    const unsigned bank = bank_of(q.addr);
    if (owner_[bank] == static_cast<int>(i)) {
      r.request_granted[i] = true;
      r.granted.push_back(q.channel);
      if (q.is_write) {
        write_word(q.addr, q.data);
      } else {
        r.read_data[i] = read_word(q.addr);
      }
    } else {
      r.conflicted.push_back(q.channel);
    }
  }
  for (const auto& q : requests) owner_[bank_of(q.addr)] = -1;
  granted_ += r.granted.size();
  conflicted_ += r.conflicted.size();
  return r;
}

std::vector<std::uint8_t> BankedMemory::backdoor_read(Addr addr, std::uint64_t len) const {
  if (!contains(addr, len)) throw SimulationFault("backdoor read out of range at " + hex_addr(addr));
  const auto off = static_cast<std::ptrdiff_t>(addr - base_);
  return {storage_.begin() + off, storage_.begin() + off + static_cast<std::ptrdiff_t>(len)};
}

void BankedMemory::backdoor_write(Addr addr, std::span<const std::uint8_t> bytes) {
  if (!contains(addr, bytes.size())) throw SimulationFault("backdoor write out of range at " + hex_addr(addr));
  std::copy(bytes.begin(), bytes.end(), storage_.begin() + static_cast<std::ptrdiff_t>(addr - base_));
}

Word BankedMemory::read_word(Addr addr) const {
  check_word(addr);
  return word_from_bytes(storage_.data() + (addr - base_), word_bytes_);
}

void BankedMemory::write_word(Addr addr, Word w) {
  check_word(addr);
  word_to_bytes(w, storage_.data() + (addr - base_), word_bytes_);
}

void BankedMemory::load_image(const std::string& path, Addr addr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimulationFault("cannot open memory image: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  backdoor_write(addr, bytes);
}

void BankedMemory::dump_image(const std::string& path, Addr addr, std::uint64_t len) const {
  const auto bytes = backdoor_read(addr, len);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimulationFault("cannot write memory image: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace xdma
