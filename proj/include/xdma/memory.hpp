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
#include <span>
#include <string>
#include <vector>

#include "xdma/types.hpp"

namespace xdma {

struct BankRequest {
  Addr addr = 0;
  bool is_write = false;
  Word data = 0;
  unsigned channel = 0;
};

struct IssueResult {
  std::vector<unsigned> granted;     // channel ids
  std::vector<unsigned> conflicted;  // channel ids
  std::vector<bool> request_granted;  // parallel to the request list
  std::vector<Word> read_data;        // parallel to the request list
};

/// Word-interleaved multi-bank scratchpad. Each bank serves one access per
/// cycle; among same-bank requests the lowest channel id wins. Accesses
/// complete in the cycle they are granted.
class BankedMemory {
 public:
  BankedMemory(Addr base, std::uint64_t size, unsigned num_banks, unsigned word_bytes);

  Addr base() const { return base_; }
  std::uint64_t size() const { return storage_.size(); }
  unsigned num_banks() const { return num_banks_; }
  unsigned word_bytes() const { return word_bytes_; }

  unsigned bank_of(Addr addr) const { return static_cast<unsigned>((addr / word_bytes_) % num_banks_); }
  bool contains(Addr addr, std::uint64_t len) const {
    return addr >= base_ && addr - base_ <= storage_.size() && len <= storage_.size() - (addr - base_);
  }

  /// One simulated cycle of bank arbitration. Throws SimulationFault on a
  /// misaligned or out-of-range request.
  IssueResult issue_cycle(std::span<const BankRequest> requests);

  /// Functional access; consumes no simulated time.
  std::vector<std::uint8_t> backdoor_read(Addr addr, std::uint64_t len) const;
  void backdoor_write(Addr addr, std::span<const std::uint8_t> bytes);
  Word read_word(Addr addr) const;
  void write_word(Addr addr, Word w);

  /// Raw binary image, file offset = address - base.
  void load_image(const std::string& path, Addr addr);
  void dump_image(const std::string& path, Addr addr, std::uint64_t len) const;

  std::uint64_t granted_accesses() const { return granted_; }
  std::uint64_t conflicted_accesses() const { return conflicted_; }

 private:
  void check_word(Addr addr) const;

  Addr base_;
  unsigned num_banks_;
  unsigned word_bytes_;
  std::vector<std::uint8_t> storage_;
  std::vector<int> owner_;  // scratch: winning request index per bank
  std::uint64_t granted_ = 0;
  std::uint64_t conflicted_ = 0;
};

}  // namespace xdma
