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

// JSON field conversions shared by the config, task and grid readers.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "xdma/types.hpp"

namespace xdma::json_util {

using nlohmann::json;

inline std::uint64_t as_u64(const json& j, const char* key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    try {
      std::size_t used = 0;
      const auto v = std::stoull(s, &used, 0);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError(std::string("field ") + key + ": expected unsigned integer");
}

inline std::uint32_t as_u32(const json& j, const char* key) {
  const auto v = as_u64(j, key);
  if (v > UINT32_MAX) throw ConfigError(std::string("field ") + key + ": value out of range");
  return static_cast<std::uint32_t>(v);
}

template <typename T, typename Fn>
void read_opt(const json& doc, const char* key, T& out, Fn conv) {
  if (auto it = doc.find(key); it != doc.end()) out = conv(*it, key);
}

inline std::vector<std::string> as_strings(const json& j, const char* key) {
  if (!j.is_array()) throw ConfigError(std::string("field ") + key + ": expected array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ConfigError(std::string("field ") + key + ": expected array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline bool as_bool(const json& j, const char* key) {
  if (!j.is_boolean()) throw ConfigError(std::string("field ") + key + ": expected boolean");
  return j.get<bool>();
}

}  // namespace xdma::json_util
