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

#include "xdma/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "json_util.hpp"
#include "xdma/plugin.hpp"

namespace xdma {

using nlohmann::json;

using json_util::as_bool;
using json_util::as_strings;
using json_util::as_u32;
using json_util::as_u64;
using json_util::read_opt;

std::optional<ClusterId> SocConfig::cluster_of(Addr addr) const {
  for (ClusterId c = 0; c < cluster_bases.size(); ++c) {
    if (addr >= cluster_bases[c] && addr - cluster_bases[c] < mem_size) return c;
  }
  return std::nullopt;
}

void SocConfig::validate() const {
  if (cluster_bases.empty()) throw ConfigError("num_clusters must be >= 1");
  if (bank_word_bits != 8 && bank_word_bits != 16 && bank_word_bits != 32 && bank_word_bits != 64) {
    throw ConfigError("bank_word_bits must be one of 8, 16, 32, 64");
  }
  if (axi_width_bits == 0 || axi_width_bits % bank_word_bits != 0) {
    throw ConfigError("axi_width_bits not a multiple of bank_word_bits");
  }
  if (num_banks == 0) throw ConfigError("num_banks must be >= 1");
  const std::uint64_t stripe = std::uint64_t{num_banks} * word_bytes();
  if (mem_size == 0 || mem_size % stripe != 0) {
    throw ConfigError("mem_size not a multiple of num_banks * bank_word_bits/8");
  }
  if (dbuf_src == 0 || dbuf_dst == 0) throw ConfigError("buffer depth must be >= 1");
  if (nchan_src == 0 || nchan_dst == 0) throw ConfigError("channel count must be >= 1");
  if (dim_src == 0 || dim_dst == 0) throw ConfigError("dimension count must be >= 1");
  if (task_fifo_depth == 0) throw ConfigError("task_fifo_depth must be >= 1");
  if (loopback_latency == 0) throw ConfigError("loopback_latency must be >= 1");
  for (std::size_t i = 0; i < cluster_bases.size(); ++i) {
    if (cluster_bases[i] % word_bytes() != 0) throw ConfigError("cluster base not word aligned");
    for (std::size_t j = i + 1; j < cluster_bases.size(); ++j) {
      const Addr a = cluster_bases[i];
      const Addr b = cluster_bases[j];
      if (a < b + mem_size && b < a + mem_size) throw ConfigError("cluster address ranges overlap");
    }
  }
  for (const auto& id : ext_src) {
    if (!is_registered_plugin(id)) throw ConfigError("unknown plugin in ext_src: " + id);
    if (plugin_is_generator(id)) throw ConfigError("generating plugin " + id + " may only be installed pre-writer");
  }
  for (const auto& id : ext_dst) {
    if (!is_registered_plugin(id)) throw ConfigError("unknown plugin in ext_dst: " + id);
  }
  if (baselines.sw_descriptor_dims != 1 && baselines.sw_descriptor_dims != 2) {
    throw ConfigError("baselines.sw_descriptor_dims must be 1 or 2");
  }
  if (baselines.reshape_words_per_cycle == 0) throw ConfigError("baselines.reshape_words_per_cycle must be >= 1");
}

SocConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  if (auto it = doc.find("version"); it != doc.end()) {
    if (as_u32(*it, "version") != kConfigSchemaVersion) throw ConfigError("unsupported config version");
  }

  SocConfig c;
  read_opt(doc, "mem_size", c.mem_size, as_u64);
  std::uint32_t clusters = c.num_clusters();
  read_opt(doc, "num_clusters", clusters, as_u32);
  if (clusters == 0) throw ConfigError("num_clusters must be >= 1");

  if (auto it = doc.find("cluster_bases"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("field cluster_bases: expected array");
    c.cluster_bases.clear();
    for (const auto& b : *it) c.cluster_bases.push_back(as_u64(b, "cluster_bases"));
    if (doc.contains("num_clusters") && c.cluster_bases.size() != clusters) {
      throw ConfigError("cluster_bases length does not match num_clusters");
    }
    if (auto base = doc.find("mem_base_addr"); base != doc.end() && !c.cluster_bases.empty() &&
                                                as_u64(*base, "mem_base_addr") != c.cluster_bases.front()) {
      throw ConfigError("mem_base_addr does not match cluster_bases[0]");
    }
  } else {
    Addr base = c.mem_base_addr();
    read_opt(doc, "mem_base_addr", base, as_u64);
    c.cluster_bases.clear();
    for (std::uint32_t i = 0; i < clusters; ++i) c.cluster_bases.push_back(base + i * c.mem_size);
  }

  read_opt(doc, "num_banks", c.num_banks, as_u32);
  read_opt(doc, "bank_word_bits", c.bank_word_bits, as_u32);
  read_opt(doc, "axi_width_bits", c.axi_width_bits, as_u32);
  read_opt(doc, "axi_latency", c.axi_latency, as_u32);
  read_opt(doc, "loopback_latency", c.loopback_latency, as_u32);
  read_opt(doc, "dim_src", c.dim_src, as_u32);
  read_opt(doc, "dim_dst", c.dim_dst, as_u32);
  read_opt(doc, "dbuf_src", c.dbuf_src, as_u32);
  read_opt(doc, "dbuf_dst", c.dbuf_dst, as_u32);
  read_opt(doc, "nchan_src", c.nchan_src, as_u32);
  read_opt(doc, "nchan_dst", c.nchan_dst, as_u32);
  read_opt(doc, "ext_src", c.ext_src, as_strings);
  read_opt(doc, "ext_dst", c.ext_dst, as_strings);
  read_opt(doc, "task_fifo_depth", c.task_fifo_depth, as_u32);

  if (auto it = doc.find("baselines"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("field baselines: expected object");
    auto& b = c.baselines;
    read_opt(*it, "idma_setup_cycles", b.idma_setup_cycles, as_u32);
    read_opt(*it, "gemmini_setup_cycles", b.gemmini_setup_cycles, as_u32);
    read_opt(*it, "sw_descriptor_dims", b.sw_descriptor_dims, as_u32);
    read_opt(*it, "sw_pipelined", b.sw_pipelined, as_bool);
    read_opt(*it, "sw_burst_overhead", b.sw_burst_overhead, as_u32);
    read_opt(*it, "accel_copy_setup_cycles", b.accel_copy_setup_cycles, as_u32);
    read_opt(*it, "reshape_words_per_cycle", b.reshape_words_per_cycle, as_u32);
    read_opt(*it, "reshape_passes", b.reshape_passes, as_u32);
  }

  c.validate();
  return c;
}

SocConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SocConfig& c) {
  json doc;
  doc["schema"] = "xdma-config";
  doc["version"] = kConfigSchemaVersion;
  doc["num_clusters"] = c.num_clusters();
  doc["mem_base_addr"] = c.mem_base_addr();
  doc["cluster_bases"] = c.cluster_bases;
  doc["mem_size"] = c.mem_size;
  doc["num_banks"] = c.num_banks;
  doc["bank_word_bits"] = c.bank_word_bits;
  doc["axi_width_bits"] = c.axi_width_bits;
  doc["axi_latency"] = c.axi_latency;
  doc["loopback_latency"] = c.loopback_latency;
  doc["dim_src"] = c.dim_src;
  doc["dim_dst"] = c.dim_dst;
  doc["dbuf_src"] = c.dbuf_src;
  doc["dbuf_dst"] = c.dbuf_dst;
  doc["nchan_src"] = c.nchan_src;
  doc["nchan_dst"] = c.nchan_dst;
  doc["ext_src"] = c.ext_src;
  doc["ext_dst"] = c.ext_dst;
  doc["task_fifo_depth"] = c.task_fifo_depth;
  const auto& b = c.baselines;
  doc["baselines"] = {
      {"idma_setup_cycles", b.idma_setup_cycles},
      {"gemmini_setup_cycles", b.gemmini_setup_cycles},
      {"sw_descriptor_dims", b.sw_descriptor_dims},
      {"sw_pipelined", b.sw_pipelined},
      {"sw_burst_overhead", b.sw_burst_overhead},
      {"accel_copy_setup_cycles", b.accel_copy_setup_cycles},
      {"reshape_words_per_cycle", b.reshape_words_per_cycle},
      {"reshape_passes", b.reshape_passes},
  };
  return doc.dump(2) + "\n";
}

}  // namespace xdma
