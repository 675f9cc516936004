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

#include "xdma/plugin.hpp"

#include <numeric>

namespace xdma {

Word IdentityPlugin::take() {
  if (!slot_) throw ContractError("identity plugin has no output");
  const Word w = *slot_;
  slot_.reset();
  return w;
}

// ---------------------------------------------------------------------------

ControlBits TransposePlugin::make_ctrl(unsigned tile_dim, unsigned elem_bytes) {
  ControlBits c;
  c.set_field(0, 8, tile_dim);
  c.set_field(8, 8, elem_bytes);
  return c;
}

void TransposePlugin::configure(const ControlBits& ctrl, unsigned word_bytes) {
  tile_ = static_cast<unsigned>(ctrl.field(0, 8));
  elem_ = static_cast<unsigned>(ctrl.field(8, 8));
  if (elem_ == 0) elem_ = 1;
  if (tile_ == 0) throw ContractError("transpose plugin: tile_dim must be >= 1");
  word_bytes_ = word_bytes;
  const unsigned block = tile_ * tile_ * elem_;
  group_words_ = std::lcm(block, word_bytes) / word_bytes;
  fill_.clear();
  drain_.clear();
}

bool TransposePlugin::can_accept() const {
  // The fill buffer is always free unless a complete group is waiting for
  // the drain side.
  return fill_.size() < group_words_;
}

void TransposePlugin::accept(Word w) {
  if (!can_accept()) throw ContractError("transpose plugin overflow");
  fill_.push_back(w);
  if (fill_.size() == group_words_ && drain_.empty()) transpose_fill();
}

Word TransposePlugin::take() {
  if (drain_.empty()) throw ContractError("transpose plugin has no output");
  const Word w = drain_.front();
  drain_.pop_front();
  if (drain_.empty() && fill_.size() == group_words_) transpose_fill();
  return w;
}

void TransposePlugin::transpose_fill() {
  std::vector<std::uint8_t> in(fill_.size() * word_bytes_);
  for (std::size_t i = 0; i < fill_.size(); ++i) word_to_bytes(fill_[i], in.data() + i * word_bytes_, word_bytes_);
  std::vector<std::uint8_t> out(in.size());
  const std::size_t block = std::size_t{tile_} * tile_ * elem_;
  for (std::size_t b = 0; b < in.size(); b += block) {
    for (unsigned r = 0; r < tile_; ++r) {
      for (unsigned c = 0; c < tile_; ++c) {
        const std::size_t src = b + (std::size_t{r} * tile_ + c) * elem_;
        const std::size_t dst = b + (std::size_t{c} * tile_ + r) * elem_;
        for (unsigned k = 0; k < elem_; ++k) out[dst + k] = in[src + k];
      }
    }
  }
  for (std::size_t i = 0; i < fill_.size(); ++i) drain_.push_back(word_from_bytes(out.data() + i * word_bytes_, word_bytes_));
  fill_.clear();
}

void TransposePlugin::end_of_stream() const {
  if (!fill_.empty()) throw ContractError("transpose plugin: stream length is not a multiple of the tile size");
}

// ---------------------------------------------------------------------------

ControlBits MemsetPlugin::make_ctrl(Word fill, std::uint32_t count) {
  ControlBits c;
  c.set_field(0, 64, fill);
  c.set_field(64, 32, count);
  return c;
}

void MemsetPlugin::configure(const ControlBits& ctrl, unsigned word_bytes) {
  fill_ = ctrl.field(0, 64);
  if (word_bytes < 8) fill_ &= (Word{1} << (8 * word_bytes)) - 1;
  count_ = ctrl.field(64, 32);
  emitted_ = 0;
  if (count_ == 0) throw ContractError("memset plugin: count must be > 0");
}

Word MemsetPlugin::take() {
  if (emitted_ >= count_) throw ContractError("memset plugin has no output");
  ++emitted_;
  return fill_;
}

// ---------------------------------------------------------------------------

bool is_registered_plugin(std::string_view id) { return id == "identity" || id == "transpose" || id == "memset"; }

bool plugin_is_generator(std::string_view id) { return id == "memset"; }

std::unique_ptr<Plugin> make_plugin(std::string_view id) {
  if (id == "identity") return std::make_unique<IdentityPlugin>();
  if (id == "transpose") return std::make_unique<TransposePlugin>();
  if (id == "memset") return std::make_unique<MemsetPlugin>();
  throw ContractError("unknown plugin: " + std::string(id));
}

PluginChain::PluginChain(ChainStage stage, const std::vector<std::string>& ids) : stage_(stage) {
  for (const auto& id : ids) {
    if (stage == ChainStage::PostReader && plugin_is_generator(id)) {
      throw ContractError("generating plugin " + id + " may only be installed pre-writer");
    }
    plugins_.push_back(make_plugin(id));
  }
}

void PluginChain::configure(const std::vector<ControlBits>& ctrls, unsigned word_bytes) {
  if (ctrls.size() > plugins_.size()) throw ContractError("more plugin control vectors than installed plugins");
  active_.clear();
  for (std::size_t i = 0; i < plugins_.size(); ++i) {
    if (i < ctrls.size() && ctrls[i].enabled()) {
      plugins_[i] = make_plugin(plugins_[i]->id());
      plugins_[i]->configure(ctrls[i], word_bytes);
      active_.push_back(plugins_[i].get());
    }
  }
}

PluginChain::StepResult PluginChain::step(std::optional<Word> in, bool downstream_ready) {
  StepResult r;
  if (active_.empty()) {
    if (in && downstream_ready) {
      r.consumed = true;
      r.out = in;
    }
    return r;
  }
  // Drain from the tail first so a stalled word frees its slot before the
  // upstream side tries to move into it.
  if (downstream_ready && active_.back()->has_output()) r.out = active_.back()->take();
  for (std::size_t i = active_.size() - 1; i > 0; --i) {
    if (active_[i - 1]->has_output() && active_[i]->can_accept()) active_[i]->accept(active_[i - 1]->take());
  }
  if (in && active_.front()->can_accept()) {
    active_.front()->accept(*in);
    r.consumed = true;
    // Combinational pass-through of the new word where every stage is free.
    for (std::size_t i = 0; i + 1 < active_.size(); ++i) {
      if (active_[i]->has_output() && active_[i + 1]->can_accept()) active_[i + 1]->accept(active_[i]->take());
    }
    if (!r.out && downstream_ready && active_.back()->has_output()) r.out = active_.back()->take();
  }
  return r;
}

unsigned PluginChain::latency() const {
  unsigned l = 0;
  for (const auto* p : active_) l += p->latency();
  return l;
}

bool PluginChain::generating() const {
  for (const auto* p : active_) {
    if (p->generator()) return true;
  }
  return false;
}

std::uint64_t PluginChain::output_words(std::uint64_t input_words) const {
  for (const auto* p : active_) input_words = p->output_words(input_words);
  return input_words;
}

bool PluginChain::holds_data() const {
  for (const auto* p : active_) {
    if (p->has_output()) return true;
  }
  return false;
}

void PluginChain::end_of_stream() const {
  for (const auto* p : active_) p->end_of_stream();
}

}  // namespace xdma
