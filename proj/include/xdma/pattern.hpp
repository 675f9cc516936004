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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xdma/types.hpp"

namespace xdma {

/// N-D affine access sequence over word-aligned addresses.
///
/// Dimension 0 is the innermost (fastest-varying) loop. The generated
/// sequence is base + sum_i(idx_i * strides[i]) for idx in the odometer
/// order of `bounds`. An empty nest emits exactly one word at `base`; a zero
/// bound makes the pattern empty.
struct AffinePattern {
  Addr base = 0;
  std::vector<std::uint64_t> bounds;
  std::vector<std::int64_t> strides;
  unsigned word_bytes = 8;

  std::size_t dims() const { return bounds.size(); }
  std::uint64_t num_words() const;
  Addr address_at(std::uint64_t index) const;

  /// Lowest and highest word address the pattern touches. Undefined for an
  /// empty pattern.
  std::pair<Addr, Addr> span() const;

  /// Checks shape, alignment and the dimension limit.
  void validate(std::size_t max_dims) const;
  /// Checks that every word lies in [lo, lo + size).
  void validate_range(Addr lo, std::uint64_t size) const;

  friend bool operator==(const AffinePattern&, const AffinePattern&) = default;
};

/// Bytes emitted by the pattern: word_bytes * prod(bounds).
std::uint64_t pattern_size(const AffinePattern& p);

/// Merges loops that are contiguous in each other and drops unit loops.
/// Enumeration order is unchanged.
AffinePattern simplify(AffinePattern p);

/// Odometer-style address generator.
class AddressGenerator {
 public:
  explicit AddressGenerator(AffinePattern pattern);

  bool done() const { return done_; }
  std::uint64_t emitted() const { return emitted_; }
  const AffinePattern& pattern() const { return pattern_; }

  /// Returns the next address. Calling this after done() is a ContractError.
  Addr next();

 private:
  AffinePattern pattern_;
  std::vector<std::uint64_t> counters_;
  Addr current_ = 0;
  std::uint64_t emitted_ = 0;
  bool done_ = false;
};

enum class LayoutKind { RowMajor, Tiled };

/// Matrix storage layout. Tiled(tm, tn) is a row-major grid of tm x tn
/// element tiles, each stored row-major.
struct LayoutSpec {
  LayoutKind kind = LayoutKind::RowMajor;
  std::uint32_t tile_m = 0;
  std::uint32_t tile_n = 0;
  std::uint32_t elem_bytes = 1;

  static LayoutSpec row_major(std::uint32_t elem_bytes = 1) { return {LayoutKind::RowMajor, 0, 0, elem_bytes}; }
  static LayoutSpec tiled(std::uint32_t tm, std::uint32_t tn, std::uint32_t elem_bytes = 1) {
    return {LayoutKind::Tiled, tm, tn, elem_bytes};
  }

  /// Accepts "MN" and "MNM<tm>N<tn>" (e.g. "MNM8N8", "MNM8N16", "MNM8N32").
  static LayoutSpec parse(std::string_view name, std::uint32_t elem_bytes = 1);
  std::string name() const;

  /// Throws ContractError if the layout cannot tile a rows x cols matrix.
  void check_shape(std::uint64_t rows, std::uint64_t cols) const;

  friend bool operator==(const LayoutSpec&, const LayoutSpec&) = default;
};

/// Pattern enumerating the layout's storage in storage order. RowMajor is
/// word-grouped into one dimension (two with `row_granular`); Tiled yields
/// the 4-D nest (words within tile row, row in tile, tile column, tile row).
AffinePattern layout_to_pattern(const LayoutSpec& layout, std::uint64_t rows, std::uint64_t cols, Addr base,
                                unsigned word_bytes, bool row_granular = false);

struct TransferPatterns {
  AffinePattern src;
  AffinePattern dst;
};

/// Which of two layouts fixes the stream order of a reshape: the one with
/// the narrower contiguous tile row (RowMajor counts as a full matrix row);
/// ties go to the destination.
bool stream_follows_source(const LayoutSpec& src, const LayoutSpec& dst, std::uint64_t cols);

/// Source/destination patterns that move a rows x cols matrix from `src`
/// layout to `dst` layout. Both patterns enumerate the same elements in the
/// same order, so a reader and a writer running them move the matrix.
TransferPatterns reshape_patterns(const LayoutSpec& src, const LayoutSpec& dst, std::uint64_t rows,
                                  std::uint64_t cols, Addr src_base, Addr dst_base, unsigned word_bytes);

/// Tile-grid permutation for transposing a square-tiled matrix: tile (i, j)
/// of the rows x cols source lands at tile (j, i) of the cols x rows
/// destination. The words of each tile stay in source order, so an in-stream
/// tile transposer completes the transpose.
TransferPatterns tile_transpose_patterns(const LayoutSpec& tiled, std::uint64_t rows, std::uint64_t cols,
                                         Addr src_base, Addr dst_base, unsigned word_bytes);

/// Pure address-pattern transpose of a row-major matrix whose elements are
/// exactly one word wide.
TransferPatterns word_transpose_patterns(std::uint64_t rows, std::uint64_t cols, Addr src_base, Addr dst_base,
                                         unsigned word_bytes);

/// Byte offset of element (r, c) under `layout`. Closed form, used by the
/// functional reference paths.
std::uint64_t element_offset(const LayoutSpec& layout, std::uint64_t rows, std::uint64_t cols, std::uint64_t r,
                             std::uint64_t c);

}  // namespace xdma
