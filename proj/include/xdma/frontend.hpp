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
#include <vector>

#include "xdma/memory.hpp"
#include "xdma/pattern.hpp"

namespace xdma {

/// Data buffer of one frontend: one FIFO of `depth` words per memory
/// channel. Stream word k lives in lane k mod lanes, so lanes may run up to
/// `depth` words apart while the stream stays in order at both ends.
class StreamBuffer {
 public:
  StreamBuffer(unsigned lanes, unsigned depth);

  unsigned lanes() const { return static_cast<unsigned>(fifos_.size()); }
  unsigned depth() const { return depth_; }
  std::size_t capacity() const { return std::size_t{depth_} * fifos_.size(); }
  std::size_t occupancy() const { return occupancy_; }

  bool lane_full(unsigned lane) const { return fifos_[lane].size() >= depth_; }
  bool lane_empty(unsigned lane) const { return fifos_[lane].empty(); }
  std::size_t lane_occupancy(unsigned lane) const { return fifos_[lane].size(); }

  void push(unsigned lane, Word w);
  Word front(unsigned lane) const { return fifos_[lane].front(); }
  Word pop(unsigned lane);
  void clear();

 private:
  unsigned depth_;
  std::vector<std::deque<Word>> fifos_;
  std::size_t occupancy_ = 0;
};

enum class FrontendRole { Reader, Writer };

struct FrontendReport {
  unsigned issued = 0;
  unsigned granted = 0;
  unsigned conflicted = 0;
  unsigned blocked = 0;  // lanes with work left but no buffer slot (reader) / no data (writer)
  std::size_t occupancy = 0;
};

/// One XDMA frontend: an N-D affine address generator feeding `nchan`
/// memory channels and a StreamBuffer of depth `dbuf` per channel.
///
/// A reader fills the buffer from memory in pattern order and is drained in
/// stream order by the backend; a writer is filled in stream order and
/// drains to memory. A conflicted channel re-issues the same request on the
/// next cycle before it advances, so each channel completes in order.
/// Address generation is combinational: no setup cycles.
class Frontend {
 public:
  Frontend(FrontendRole role, unsigned nchan, unsigned dbuf, unsigned max_dims);

  FrontendRole role() const { return role_; }
  unsigned channels() const { return nchan_; }
  const StreamBuffer& buffer() const { return buffer_; }

  /// Loads a new pattern. The previous task must be finished.
  void start(const AffinePattern& pattern);
  bool busy() const { return busy_; }
  /// Reader: every word read and drained. Writer: every word written.
  bool finished() const;
  void release() { busy_ = false; }

  std::uint64_t total_words() const { return total_; }
  std::uint64_t words_moved() const { return moved_; }

  // Stream side, in stream order.
  bool can_pop() const;
  Word peek() const;
  Word pop();
  bool can_push() const;
  void push(Word w);
  std::uint64_t words_popped() const { return stream_pos_; }
  std::uint64_t words_pushed() const { return stream_pos_; }

  // Memory side. `collect_requests` appends this cycle's requests with
  // channel ids starting at `channel_base`; `apply_results` consumes the
  // outcomes for the same slice of the request list.
  void collect_requests(std::vector<BankRequest>& out, unsigned channel_base);
  FrontendReport apply_results(const IssueResult& result, std::size_t first);

 private:
  Addr lane_address(unsigned lane) const;

  FrontendRole role_;
  unsigned nchan_;
  unsigned max_dims_;
  StreamBuffer buffer_;
  AffinePattern pattern_;
  std::uint64_t total_ = 0;
  std::uint64_t moved_ = 0;        // words granted to/from memory
  std::uint64_t stream_pos_ = 0;   // words popped (reader) or pushed (writer)
  std::vector<std::uint64_t> lane_next_;  // next stream index each lane accesses
  std::vector<unsigned> issued_lanes_;
  unsigned blocked_ = 0;
  bool busy_ = false;
};

/// Standalone single-frontend cycles against a memory.
FrontendReport reader_tick(Frontend& fe, BankedMemory& mem);
FrontendReport writer_tick(Frontend& fe, BankedMemory& mem);

}  // namespace xdma
