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
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xdma/types.hpp"

namespace xdma {

/// A word-stream transducer with valid/ready semantics. The host moves at
/// most one word into and one word out of each plugin per handshake step.
class Plugin {
 public:
  virtual ~Plugin() = default;

  virtual std::string_view id() const = 0;
  /// Per-task setup from the plugin's control bit vector (never empty here;
  /// disabled plugins are bypassed by the chain). Throws ContractError.
  virtual void configure(const ControlBits& ctrl, unsigned word_bytes) = 0;
  /// Words the plugin holds before its first output appears.
  virtual unsigned latency() const = 0;
  virtual bool generator() const { return false; }
  /// Output words for a stream of `input_words` words.
  virtual std::uint64_t output_words(std::uint64_t input_words) const { return input_words; }

  virtual bool can_accept() const = 0;
  virtual void accept(Word w) = 0;
  virtual bool has_output() const = 0;
  virtual Word take() = 0;
  /// Called once the upstream stream is exhausted; throws ContractError if
  /// the plugin holds an incomplete unit of work.
  virtual void end_of_stream() const {}
};

/// Passes every word through unchanged with no added latency.
class IdentityPlugin final : public Plugin {
 public:
  std::string_view id() const override { return "identity"; }
  void configure(const ControlBits&, unsigned) override {}
  unsigned latency() const override { return 0; }
  bool can_accept() const override { return !slot_.has_value(); }
  void accept(Word w) override { slot_ = w; }
  bool has_output() const override { return slot_.has_value(); }
  Word take() override;

 private:
  std::optional<Word> slot_;
};

/// Transposes every consecutive tile_dim x tile_dim block of elements.
///
/// ctrl bits [0, 8): tile_dim; bits [8, 16): element bytes (0 means 1).
/// Double-buffered: one group fills while the previous one drains, so it
/// sustains one word per step after a fill latency of one group (tile_dim
/// words for a tile row of exactly one word).
class TransposePlugin final : public Plugin {
 public:
  std::string_view id() const override { return "transpose"; }
  void configure(const ControlBits& ctrl, unsigned word_bytes) override;
  unsigned latency() const override { return group_words_; }
  bool can_accept() const override;
  void accept(Word w) override;
  bool has_output() const override { return !drain_.empty(); }
  Word take() override;
  void end_of_stream() const override;

  static ControlBits make_ctrl(unsigned tile_dim, unsigned elem_bytes = 1);

 private:
  void transpose_fill();

  unsigned tile_ = 0;
  unsigned elem_ = 1;
  unsigned word_bytes_ = 8;
  unsigned group_words_ = 0;
  std::vector<Word> fill_;
  std::deque<Word> drain_;
};

/// Emits `count` copies of `fill_word` and discards its input.
///
/// ctrl bits [0, 64): fill word; bits [64, 96): count.
class MemsetPlugin final : public Plugin {
 public:
  std::string_view id() const override { return "memset"; }
  void configure(const ControlBits& ctrl, unsigned word_bytes) override;
  unsigned latency() const override { return 0; }
  bool generator() const override { return true; }
  std::uint64_t output_words(std::uint64_t) const override { return count_; }
  bool can_accept() const override { return true; }
  void accept(Word) override {}
  bool has_output() const override { return emitted_ < count_; }
  Word take() override;

  static ControlBits make_ctrl(Word fill, std::uint32_t count);

 private:
  Word fill_ = 0;
  std::uint64_t count_ = 0;
  std::uint64_t emitted_ = 0;
};

bool is_registered_plugin(std::string_view id);
bool plugin_is_generator(std::string_view id);
std::unique_ptr<Plugin> make_plugin(std::string_view id);

enum class ChainStage { PostReader, PreWriter };

/// Cascade of plugins hosted after a reader or before a writer. Plugins whose
/// control vector is empty are bypassed and behave as identity.
class PluginChain {
 public:
  struct StepResult {
    bool consumed = false;
    std::optional<Word> out;
  };

  PluginChain(ChainStage stage, const std::vector<std::string>& ids);

  ChainStage stage() const { return stage_; }
  std::size_t size() const { return plugins_.size(); }

  /// `ctrls[i]` configures plugin i; missing or empty entries disable it.
  void configure(const std::vector<ControlBits>& ctrls, unsigned word_bytes);

  /// One handshake step. `in` absent models a bubble. Returns whether the
  /// input was taken and at most one output word.
  StepResult step(std::optional<Word> in, bool downstream_ready = true);

  unsigned latency() const;
  bool generating() const;
  std::uint64_t output_words(std::uint64_t input_words) const;
  bool holds_data() const;
  void end_of_stream() const;

 private:
  ChainStage stage_;
  std::vector<std::unique_ptr<Plugin>> plugins_;
  std::vector<Plugin*> active_;
};

}  // namespace xdma
