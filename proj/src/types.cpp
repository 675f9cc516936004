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

#include "xdma/types.hpp"

#include <cctype>

namespace xdma {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

// Hex strings are written most-significant nibble first, like an integer
// literal ("0x0108" is bytes {0x08, 0x01}).
ControlBits ControlBits::from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  std::vector<std::uint8_t> bytes;
  if (hex.empty()) return ControlBits{};
  bytes.reserve((hex.size() + 1) / 2);
  int pos = static_cast<int>(hex.size());
  while (pos > 0) {
    const int lo = hex_digit(hex[pos - 1]);
    const int hi = pos >= 2 ? hex_digit(hex[pos - 2]) : 0;
    if (lo < 0 || hi < 0) throw ConfigError("invalid hex control vector: " + std::string(hex));
    bytes.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    pos -= 2;
  }
  return ControlBits{std::move(bytes)};
}

std::string ControlBits::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "0x";
  for (auto it = bytes_.rbegin(); it != bytes_.rend(); ++it) {
    out.push_back(kDigits[*it >> 4]);
    out.push_back(kDigits[*it & 0xF]);
  }
  return bytes_.empty() ? std::string{} : out;
}

std::uint64_t ControlBits::field(unsigned bit_offset, unsigned width) const {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) {
    const unsigned bit = bit_offset + i;
    const unsigned byte = bit / 8;
    if (byte >= bytes_.size()) break;
    if (bytes_[byte] >> (bit % 8) & 1U) v |= std::uint64_t{1} << i;
  }
  return v;
}

void ControlBits::set_field(unsigned bit_offset, unsigned width, std::uint64_t value) {
  const unsigned needed = (bit_offset + width + 7) / 8;
  if (bytes_.size() < needed) bytes_.resize(needed, 0);
  for (unsigned i = 0; i < width; ++i) {
    const unsigned bit = bit_offset + i;
    auto& b = bytes_[bit / 8];
    const auto mask = static_cast<std::uint8_t>(1U << (bit % 8));
    if (value >> i & 1U) {
      b = static_cast<std::uint8_t>(b | mask);
    } else {
      b = static_cast<std::uint8_t>(b & ~mask);
    }
  }
}

}  // namespace xdma
