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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xdma {

using Addr = std::uint64_t;
using Cycle = std::uint64_t;
using TaskId = std::uint32_t;
using ClusterId = std::uint32_t;

/// One bank word. Bank words are at most 64 bits wide; byte i of the word
/// lives in bits [8i, 8i+8) (little-endian packing).
using Word = std::uint64_t;

inline constexpr unsigned kMaxWordBytes = 8;

/// Raised for malformed configuration documents or violated config invariants.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a caller hands an operation arguments outside its contract.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised by the cycle model on conditions real hardware would hang or
/// corrupt on: out-of-range accesses, protocol violations, exceeded budgets.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Control bit vector for one plugin, stored little-endian byte-wise.
/// An empty vector means the plugin is disabled for the task.
class ControlBits {
 public:
  ControlBits() = default;
  explicit ControlBits(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}

  static ControlBits from_hex(std::string_view hex);
  std::string to_hex() const;

  /// Little-endian field extraction; bits beyond the stored vector read as 0.
  std::uint64_t field(unsigned bit_offset, unsigned width) const;
  void set_field(unsigned bit_offset, unsigned width, std::uint64_t value);

  bool enabled() const { return !bytes_.empty(); }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  friend bool operator==(const ControlBits&, const ControlBits&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
};

inline Word word_from_bytes(const std::uint8_t* p, unsigned n) {
  Word w = 0;
  for (unsigned i = 0; i < n; ++i) w |= static_cast<Word>(p[i]) << (8 * i);
  return w;
}

inline void word_to_bytes(Word w, std::uint8_t* p, unsigned n) {
  for (unsigned i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(w >> (8 * i));
}

}  // namespace xdma
