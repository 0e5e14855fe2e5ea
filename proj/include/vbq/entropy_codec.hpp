// Copyright 2026 The VBQ Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Lossless coding of code point sequences.
//
// Two schemes are provided. The arithmetic coder treats each code point as a
// symbol of a static empirical model. The concatenation codec writes the
// binary expansions back to back (dropping each terminal 1) and sends the
// rates separately through the arithmetic coder.

#ifndef VBQ_ENTROPY_CODEC_HPP_
#define VBQ_ENTROPY_CODEC_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vbq/dyadic.hpp"

namespace vbq {

// MSB-first bit sequence. Bits past bit_length in the last byte are zero.
class BitString {
 public:
  BitString() = default;
  BitString(std::vector<std::uint8_t> bytes, std::uint64_t bit_length);

  static BitString from_string(std::string_view bits);
  std::string to_string() const;

  void push_back(bool bit);
  void append(const BitString& other);
  bool operator[](std::uint64_t i) const {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1U;
  }

  std::uint64_t bit_length() const noexcept { return bit_length_; }
  bool empty() const noexcept { return bit_length_ == 0; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bit_length_ = 0;
};

// Empirical code point counts, keyed and ordered by (rate, numerator).
class FrequencyTable {
 public:
  using Map = std::map<CodePoint, std::uint32_t, CodePoint::RateOrder>;

  FrequencyTable() = default;
  // Throws InvalidArgumentError for zero counts and CodingError when the
  // total exceeds 2^32 - 1.
  explicit FrequencyTable(Map entries);

  const Map& entries() const noexcept { return entries_; }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  bool contains(const CodePoint& cp) const { return entries_.contains(cp); }
  std::uint32_t count(const CodePoint& cp) const;

  // Canonical byte form: u32 symbol count, then per symbol the code point
  // wire form and a u32 count, all little-endian except the numerator.
  void serialize(std::vector<std::uint8_t>& out) const;
  static FrequencyTable deserialize(std::span<const std::uint8_t> in,
                                    std::size_t& offset);
  // CRC-32 of the canonical byte form.
  std::uint32_t checksum() const;

  friend bool operator==(const FrequencyTable&,
                         const FrequencyTable&) = default;

 private:
  Map entries_;
  std::uint64_t total_ = 0;
};

enum class Smoothing { kNone, kAddOne };

// Add-one smoothing covers every code point up to the largest observed rate,
// which must not exceed kMaxSmoothedRate.
inline constexpr unsigned kMaxSmoothedRate = 20;

// Throws InvalidArgumentError for an empty input.
FrequencyTable build_frequency_table(std::span<const CodePoint> symbols,
                                     Smoothing smoothing = Smoothing::kNone);

// Static arithmetic coder over symbol indices 0..counts.size()-1 with the
// given (nonzero) frequencies. The payload is the shortest bit string that
// identifies the final coding interval; it never exceeds the information
// content by more than 2 bits plus a rounding loss below 1e-7 bits/symbol.
BitString encode_indices(std::span<const std::uint32_t> indices,
                         std::span<const std::uint32_t> counts);
// Throws DecodeError when the payload does not terminate exactly where an
// encoder using the same model would have stopped.
std::vector<std::uint32_t> decode_indices(const BitString& bits,
                                          std::span<const std::uint32_t> counts,
                                          std::size_t count);

// Throws CodingError naming the first symbol missing from the table.
BitString ac_encode(std::span<const CodePoint> symbols,
                    const FrequencyTable& table);
std::vector<CodePoint> ac_decode(const BitString& bits,
                                 const FrequencyTable& table,
                                 std::size_t count);

// -sum log2(count / total). Throws CodingError for uncovered symbols.
double information_content(std::span<const CodePoint> symbols,
                           const FrequencyTable& table);

struct ConcatStream {
  // Rate histogram header (u8 distinct rates, then u8 rate + u32 count each)
  // followed by the arithmetic-coded rate sequence.
  BitString rate_stream;
  // Expansions b_1..b_{R-1} of every code point, back to back.
  BitString payload;

  std::uint64_t total_bits() const noexcept {
    return rate_stream.bit_length() + payload.bit_length();
  }
};

ConcatStream concat_encode(std::span<const CodePoint> symbols);
// Throws DecodeError when the payload length disagrees with the rates.
std::vector<CodePoint> concat_decode(const BitString& rate_stream,
                                     const BitString& payload,
                                     std::size_t count);

}  // namespace vbq

#endif  // VBQ_ENTROPY_CODEC_HPP_
