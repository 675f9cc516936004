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

#include "xdma/pattern.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace xdma {

std::uint64_t AffinePattern::num_words() const {
  std::uint64_t n = 1;
  for (auto b : bounds) n *= b;
  return n;
}

Addr AffinePattern::address_at(std::uint64_t index) const {
  std::int64_t offset = 0;
  for (std::size_t d = 0; d < bounds.size(); ++d) {
    const auto idx = index % bounds[d];
    index /= bounds[d];
    offset += static_cast<std::int64_t>(idx) * strides[d];
  }
  return static_cast<Addr>(static_cast<std::int64_t>(base) + offset);
}

std::pair<Addr, Addr> AffinePattern::span() const {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  for (std::size_t d = 0; d < bounds.size(); ++d) {
    if (bounds[d] == 0) continue;
    const std::int64_t extent = static_cast<std::int64_t>(bounds[d] - 1) * strides[d];
    (extent < 0 ? lo : hi) += extent;
  }
  return {static_cast<Addr>(static_cast<std::int64_t>(base) + lo),
          static_cast<Addr>(static_cast<std::int64_t>(base) + hi)};
}

void AffinePattern::validate(std::size_t max_dims) const {
  if (bounds.size() != strides.size()) throw ContractError("pattern bounds and strides differ in length");
  if (bounds.size() > max_dims) {
    throw ContractError("pattern has " + std::to_string(bounds.size()) + " dimensions, frontend supports " +
                        std::to_string(max_dims));
  }
  if (word_bytes == 0 || word_bytes > kMaxWordBytes) throw ContractError("pattern word_bytes out of range");
  if (base % word_bytes != 0) throw ContractError("pattern base not word aligned");
  for (auto s : strides) {
    if (s % static_cast<std::int64_t>(word_bytes) != 0) throw ContractError("pattern stride not word aligned");
  }
}

void AffinePattern::validate_range(Addr lo, std::uint64_t size) const {
  if (num_words() == 0) return;
  const auto [first, last] = span();
  if (first > last || first < lo || last + word_bytes > lo + size) {
    throw ContractError("pattern exceeds memory range");
  }
}

std::uint64_t pattern_size(const AffinePattern& p) { return p.word_bytes * p.num_words(); }

AffinePattern simplify(AffinePattern p) {
  if (p.num_words() == 0) return p;
  AffinePattern out;
  out.base = p.base;
  out.word_bytes = p.word_bytes;
  for (std::size_t d = 0; d < p.bounds.size(); ++d) {
    if (p.bounds[d] == 1) continue;
    if (!out.bounds.empty() &&
        p.strides[d] == out.strides.back() * static_cast<std::int64_t>(out.bounds.back())) {
      out.bounds.back() *= p.bounds[d];
      continue;
    }
    out.bounds.push_back(p.bounds[d]);
    out.strides.push_back(p.strides[d]);
  }
  return out;
}

AddressGenerator::AddressGenerator(AffinePattern pattern)
    : pattern_(std::move(pattern)), counters_(pattern_.bounds.size(), 0), current_(pattern_.base) {
  done_ = pattern_.num_words() == 0;
}

Addr AddressGenerator::next() {
  if (done_) throw ContractError("address generator advanced past its last address");
  const Addr out = current_;
  ++emitted_;
  std::size_t d = 0;
  for (; d < counters_.size(); ++d) {
    if (++counters_[d] < pattern_.bounds[d]) {
      current_ += static_cast<Addr>(pattern_.strides[d]);
      break;
    }
    current_ -= static_cast<Addr>(static_cast<std::int64_t>(counters_[d] - 1) * pattern_.strides[d]);
    counters_[d] = 0;
  }
  if (d == counters_.size()) done_ = true;
  return out;
}

// ---------------------------------------------------------------------------
// Layouts

LayoutSpec LayoutSpec::parse(std::string_view name, std::uint32_t elem_bytes) {
  if (elem_bytes == 0) throw ContractError("elem_bytes must be >= 1");
  if (name == "MN") return row_major(elem_bytes);
  auto bad = [&] { return ContractError("unknown layout: " + std::string(name)); };
  if (!name.starts_with("MNM")) throw bad();
  name.remove_prefix(3);
  const auto n_pos = name.find('N');
  if (n_pos == std::string_view::npos) throw bad();
  std::uint32_t tm = 0;
  std::uint32_t tn = 0;
  const auto m_part = name.substr(0, n_pos);
  const auto n_part = name.substr(n_pos + 1);
  auto r1 = std::from_chars(m_part.data(), m_part.data() + m_part.size(), tm);
  auto r2 = std::from_chars(n_part.data(), n_part.data() + n_part.size(), tn);
  if (r1.ec != std::errc{} || r1.ptr != m_part.data() + m_part.size() || r2.ec != std::errc{} ||
      r2.ptr != n_part.data() + n_part.size() || tm == 0 || tn == 0) {
    throw bad();
  }
  return tiled(tm, tn, elem_bytes);
}

std::string LayoutSpec::name() const {
  if (kind == LayoutKind::RowMajor) return "MN";
  return "MNM" + std::to_string(tile_m) + "N" + std::to_string(tile_n);
}

void LayoutSpec::check_shape(std::uint64_t rows, std::uint64_t cols) const {
  if (rows == 0 || cols == 0) throw ContractError("matrix shape must be non-empty");
  if (kind == LayoutKind::Tiled) {
    if (rows % tile_m != 0) throw ContractError("tile_m does not divide rows (padding unsupported)");
    if (cols % tile_n != 0) throw ContractError("tile_n does not divide cols (padding unsupported)");
  }
}

std::uint64_t element_offset(const LayoutSpec& layout, std::uint64_t rows, std::uint64_t cols, std::uint64_t r,
                             std::uint64_t c) {
  (void)rows;
  if (layout.kind == LayoutKind::RowMajor) return (r * cols + c) * layout.elem_bytes;
  const std::uint64_t tm = layout.tile_m;
  const std::uint64_t tn = layout.tile_n;
  const std::uint64_t tile = (r / tm) * (cols / tn) + c / tn;
  return (tile * tm * tn + (r % tm) * tn + c % tn) * layout.elem_bytes;
}

AffinePattern layout_to_pattern(const LayoutSpec& layout, std::uint64_t rows, std::uint64_t cols, Addr base,
                                unsigned word_bytes, bool row_granular) {
  layout.check_shape(rows, cols);
  const std::uint64_t e = layout.elem_bytes;
  if ((rows * cols * e) % word_bytes != 0) throw ContractError("matrix size is not a multiple of the word size");
  AffinePattern p;
  p.base = base;
  p.word_bytes = word_bytes;
  if (layout.kind == LayoutKind::RowMajor) {
    if (row_granular) {
      if ((cols * e) % word_bytes != 0) throw ContractError("row length is not a multiple of the word size");
      p.bounds = {cols * e / word_bytes, rows};
      p.strides = {static_cast<std::int64_t>(word_bytes), static_cast<std::int64_t>(cols * e)};
    } else {
      p.bounds = {rows * cols * e / word_bytes};
      p.strides = {static_cast<std::int64_t>(word_bytes)};
    }
    return p;
  }
  const std::uint64_t tm = layout.tile_m;
  const std::uint64_t tn = layout.tile_n;
  if ((tn * e) % word_bytes != 0) throw ContractError("tile row is narrower than a word (sub-word access unsupported)");
  p.bounds = {tn * e / word_bytes, tm, cols / tn, rows / tm};
  p.strides = {static_cast<std::int64_t>(word_bytes), static_cast<std::int64_t>(tn * e),
               static_cast<std::int64_t>(tm * tn * e), static_cast<std::int64_t>((cols / tn) * tm * tn * e)};
  return p;
}

namespace {

std::uint64_t row_width_bytes(const LayoutSpec& l, std::uint64_t cols) {
  return (l.kind == LayoutKind::RowMajor ? cols : l.tile_n) * l.elem_bytes;
}

// One digit of the mixed-radix decomposition of a row or column index.
struct Digit {
  bool is_row;
  std::uint64_t weight;  // in elements along its axis
  std::uint64_t radix;
};

std::vector<std::uint64_t> boundary_chain(std::vector<std::uint64_t> points, std::uint64_t extent) {
  points.push_back(extent);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] % points[i - 1] != 0) throw ContractError("layout tile sizes do not nest");
  }
  return points;
}

// Byte stride of incrementing one digit, valid because every layout boundary
// is a boundary of the digit chain.
std::int64_t digit_stride(const LayoutSpec& l, std::uint64_t cols, const Digit& d) {
  const std::uint64_t e = l.elem_bytes;
  if (l.kind == LayoutKind::RowMajor) {
    return static_cast<std::int64_t>((d.is_row ? d.weight * cols : d.weight) * e);
  }
  const std::uint64_t tm = l.tile_m;
  const std::uint64_t tn = l.tile_n;
  if (d.is_row) {
    if (d.weight >= tm) return static_cast<std::int64_t>((d.weight / tm) * (cols / tn) * tm * tn * e);
    return static_cast<std::int64_t>(d.weight * tn * e);
  }
  if (d.weight >= tn) return static_cast<std::int64_t>((d.weight / tn) * tm * tn * e);
  return static_cast<std::int64_t>(d.weight * e);
}

}  // namespace

bool stream_follows_source(const LayoutSpec& src, const LayoutSpec& dst, std::uint64_t cols) {
  return row_width_bytes(src, cols) < row_width_bytes(dst, cols);
}

TransferPatterns reshape_patterns(const LayoutSpec& src, const LayoutSpec& dst, std::uint64_t rows,
                                  std::uint64_t cols, Addr src_base, Addr dst_base, unsigned word_bytes) {
  src.check_shape(rows, cols);
  dst.check_shape(rows, cols);
  if (src.elem_bytes != dst.elem_bytes) throw ContractError("source and destination element sizes differ");
  const std::uint64_t e = src.elem_bytes;
  if (word_bytes % e != 0) throw ContractError("element size does not divide the word size");
  const std::uint64_t per_word = word_bytes / e;
  for (const auto* l : {&src, &dst}) {
    if (row_width_bytes(*l, cols) % word_bytes != 0) {
      throw ContractError("layout " + l->name() + " has rows narrower than a word (sub-word access unsupported)");
    }
  }

  std::vector<std::uint64_t> col_points{per_word};
  std::vector<std::uint64_t> row_points{1};
  for (const auto* l : {&src, &dst}) {
    if (l->kind == LayoutKind::Tiled) {
      col_points.push_back(l->tile_n);
      row_points.push_back(l->tile_m);
    }
  }
  const auto col_chain = boundary_chain(col_points, cols);
  const auto row_chain = boundary_chain(row_points, rows);

  std::vector<Digit> digits;
  for (std::size_t i = 0; i + 1 < col_chain.size(); ++i) {
    digits.push_back({false, col_chain[i], col_chain[i + 1] / col_chain[i]});
  }
  for (std::size_t i = 0; i + 1 < row_chain.size(); ++i) {
    digits.push_back({true, row_chain[i], row_chain[i + 1] / row_chain[i]});
  }

  const LayoutSpec& order = stream_follows_source(src, dst, cols) ? src : dst;
  std::stable_sort(digits.begin(), digits.end(), [&](const Digit& a, const Digit& b) {
    return digit_stride(order, cols, a) < digit_stride(order, cols, b);
  });

  TransferPatterns out;
  out.src.base = src_base;
  out.dst.base = dst_base;
  out.src.word_bytes = out.dst.word_bytes = word_bytes;
  for (const auto& d : digits) {
    out.src.bounds.push_back(d.radix);
    out.src.strides.push_back(digit_stride(src, cols, d));
    out.dst.bounds.push_back(d.radix);
    out.dst.strides.push_back(digit_stride(dst, cols, d));
  }
  out.src = simplify(std::move(out.src));
  out.dst = simplify(std::move(out.dst));
  return out;
}

TransferPatterns tile_transpose_patterns(const LayoutSpec& tiled, std::uint64_t rows, std::uint64_t cols,
                                         Addr src_base, Addr dst_base, unsigned word_bytes) {
  if (tiled.kind != LayoutKind::Tiled || tiled.tile_m != tiled.tile_n) {
    throw ContractError("tile transpose needs a square-tiled layout");
  }
  tiled.check_shape(rows, cols);
  const std::uint64_t t = tiled.tile_m;
  const std::uint64_t tile_bytes = t * t * tiled.elem_bytes;
  if ((t * tiled.elem_bytes) % word_bytes != 0) throw ContractError("tile row is narrower than a word");
  TransferPatterns out;
  out.src = layout_to_pattern(tiled, rows, cols, src_base, word_bytes);
  out.src = simplify(std::move(out.src));
  // Source tile (i, j) in row-major tile order; destination is the cols x rows
  // matrix, whose tile grid has rows / t tile columns.
  out.dst.base = dst_base;
  out.dst.word_bytes = word_bytes;
  out.dst.bounds = {tile_bytes / word_bytes, cols / t, rows / t};
  out.dst.strides = {static_cast<std::int64_t>(word_bytes), static_cast<std::int64_t>((rows / t) * tile_bytes),
                     static_cast<std::int64_t>(tile_bytes)};
  out.dst = simplify(std::move(out.dst));
  return out;
}

TransferPatterns word_transpose_patterns(std::uint64_t rows, std::uint64_t cols, Addr src_base, Addr dst_base,
                                         unsigned word_bytes) {
  if (rows == 0 || cols == 0) throw ContractError("matrix shape must be non-empty");
  TransferPatterns out;
  out.src.base = src_base;
  out.src.word_bytes = word_bytes;
  out.src.bounds = {rows * cols};
  out.src.strides = {static_cast<std::int64_t>(word_bytes)};
  out.dst.base = dst_base;
  out.dst.word_bytes = word_bytes;
  out.dst.bounds = {cols, rows};
  out.dst.strides = {static_cast<std::int64_t>(rows * word_bytes), static_cast<std::int64_t>(word_bytes)};
  out.dst = simplify(std::move(out.dst));
  return out;
}

}  // namespace xdma
