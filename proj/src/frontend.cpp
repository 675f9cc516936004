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

#include "xdma/frontend.hpp"

namespace xdma {

StreamBuffer::StreamBuffer(unsigned lanes, unsigned depth) : depth_(depth), fifos_(lanes) {
  if (lanes == 0 || depth == 0) throw ContractError("stream buffer needs at least one lane and one slot");
}

void StreamBuffer::push(unsigned lane, Word w) {
  if (lane_full(lane)) throw ContractError("push into a full stream buffer lane");
  fifos_[lane].push_back(w);
  ++occupancy_;
}

Word StreamBuffer::pop(unsigned lane) {
  if (lane_empty(lane)) throw ContractError("pop from an empty stream buffer lane");
  const Word w = fifos_[lane].front();
  fifos_[lane].pop_front();
  --occupancy_;
  return w;
}

void StreamBuffer::clear() {
  for (auto& f : fifos_) f.clear();
  occupancy_ = 0;
}

Frontend::Frontend(FrontendRole role, unsigned nchan, unsigned dbuf, unsigned max_dims)
    : role_(role), nchan_(nchan), max_dims_(max_dims), buffer_(nchan, dbuf), lane_next_(nchan, 0) {}

void Frontend::start(const AffinePattern& pattern) {
  if (busy_ && !finished()) throw ContractError("frontend started while a task is still running");
  pattern.validate(max_dims_);
  pattern_ = pattern;
  total_ = pattern.num_words();
  moved_ = 0;
  stream_pos_ = 0;
  buffer_.clear();
  for (unsigned l = 0; l < nchan_; ++l) lane_next_[l] = l;
  busy_ = true;
}

bool Frontend::finished() const {
  if (role_ == FrontendRole::Reader) return moved_ == total_ && stream_pos_ == total_;
  return moved_ == total_;
}

bool Frontend::can_pop() const {
  return role_ == FrontendRole::Reader && busy_ && stream_pos_ < total_ &&
         !buffer_.lane_empty(static_cast<unsigned>(stream_pos_ % nchan_));
}

Word Frontend::peek() const {
  if (!can_pop()) throw ContractError("frontend peek without data");
  return buffer_.front(static_cast<unsigned>(stream_pos_ % nchan_));
}

Word Frontend::pop() {
  if (!can_pop()) throw ContractError("frontend pop without data");
  const Word w = buffer_.pop(static_cast<unsigned>(stream_pos_ % nchan_));
  ++stream_pos_;
  return w;
}

bool Frontend::can_push() const {
  return role_ == FrontendRole::Writer && busy_ && stream_pos_ < total_ &&
         !buffer_.lane_full(static_cast<unsigned>(stream_pos_ % nchan_));
}

void Frontend::push(Word w) {
  if (!can_push()) throw ContractError("frontend push without space");
  buffer_.push(static_cast<unsigned>(stream_pos_ % nchan_), w);
  ++stream_pos_;
}

Addr Frontend::lane_address(unsigned lane) const { return pattern_.address_at(lane_next_[lane]); }

void Frontend::collect_requests(std::vector<BankRequest>& out, unsigned channel_base) {
  issued_lanes_.clear();
  blocked_ = 0;
  if (!busy_) return;
  for (unsigned l = 0; l < nchan_; ++l) {
    if (lane_next_[l] >= total_) continue;
    if (role_ == FrontendRole::Reader) {
      if (buffer_.lane_full(l)) {
        ++blocked_;
        continue;
      }
      out.push_back({lane_address(l), false, 0, channel_base + l});
    } else {
      if (buffer_.lane_empty(l)) {
        ++blocked_;
        continue;
      }
      out.push_back({lane_address(l), true, buffer_.front(l), channel_base + l});
    }
    issued_lanes_.push_back(l);
  }
}

FrontendReport Frontend::apply_results(const IssueResult& result, std::size_t first) {
  FrontendReport rep;
  rep.issued = static_cast<unsigned>(issued_lanes_.size());
  rep.blocked = blocked_;
  for (std::size_t i = 0; i < issued_lanes_.size(); ++i) {
    const unsigned l = issued_lanes_[i];
    if (!result.request_granted[first + i]) {
      ++rep.conflicted;
      continue;
    }
    ++rep.granted;
    if (role_ == FrontendRole::Reader) {
      buffer_.push(l, result.read_data[first + i]);
    } else {
      buffer_.pop(l);
    }
    lane_next_[l] += nchan_;
    ++moved_;
  }
  issued_lanes_.clear();
  rep.occupancy = buffer_.occupancy();
  return rep;
}

namespace {

FrontendReport tick_alone(Frontend& fe, BankedMemory& mem) {
  std::vector<BankRequest> reqs;
  fe.collect_requests(reqs, 0);
  const auto res = mem.issue_cycle(reqs);
  return fe.apply_results(res, 0);
}

}  // namespace

FrontendReport reader_tick(Frontend& fe, BankedMemory& mem) {
  if (fe.role() != FrontendRole::Reader) throw ContractError("reader_tick on a writer frontend");
  return tick_alone(fe, mem);
}

FrontendReport writer_tick(Frontend& fe, BankedMemory& mem) {
  if (fe.role() != FrontendRole::Writer) throw ContractError("writer_tick on a reader frontend");
  return tick_alone(fe, mem);
}

}  // namespace xdma
