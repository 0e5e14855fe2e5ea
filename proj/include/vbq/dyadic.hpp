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

// Exact arithmetic on dyadic code points n / 2^R in (0, 1).

#ifndef VBQ_DYADIC_HPP_
#define VBQ_DYADIC_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vbq {

inline constexpr unsigned kMaxRate = 60;

// A quantile with a finite binary expansion (0.b1 b2 ... bR)_2 whose last
// bit is 1. The numerator is therefore always odd and the rate is the length
// of the expansion including the terminal 1.
class CodePoint {
 public:
  // The median 1/2, i.e. the single-bit expansion "1".
  constexpr CodePoint() = default;

  // Builds the canonical code point for n / 2^scale. Trailing zero bits are
  // stripped, so make(2, 2) == make(1, 1). Throws DomainError unless
  // 0 < n < 2^scale, and InvalidArgumentError if scale exceeds kMaxRate.
  static CodePoint make(std::uint64_t numerator, unsigned scale);

  // Parses a bit string such as "111" (= 7/8). Throws InvalidArgumentError
  // on empty or non-binary input and NonCanonicalError on a trailing zero.
  static CodePoint from_bits(std::string_view bits);

  std::uint64_t numerator() const noexcept { return numerator_; }
  unsigned rate() const noexcept { return rate_; }

  std::string to_bits() const;

  // Value and 1 - value. Both are exact for rates up to 53.
  double value() const noexcept;
  double complement() const noexcept;

  // Orders by value. Within a fixed rate this agrees with numerator order.
  friend std::strong_ordering operator<=>(const CodePoint& a,
                                          const CodePoint& b) noexcept;
  friend bool operator==(const CodePoint&, const CodePoint&) = default;

  // Total order used for canonical table layouts: rate first, then numerator.
  struct RateOrder {
    bool operator()(const CodePoint& a, const CodePoint& b) const noexcept {
      return a.rate_ != b.rate_ ? a.rate_ < b.rate_
                                : a.numerator_ < b.numerator_;
    }
  };

 private:
  constexpr CodePoint(std::uint64_t numerator, unsigned rate)
      : numerator_(numerator), rate_(rate) {}

  std::uint64_t numerator_ = 1;
  unsigned rate_ = 1;
};

// n / 2^scale without canonicalization. Used for grid neighbors, which may
// land on the excluded boundaries 0 and 1.
struct GridValue {
  std::uint64_t numerator = 0;
  unsigned scale = 0;

  bool is_zero() const noexcept { return numerator == 0; }
  bool is_one() const noexcept {
    return numerator == (std::uint64_t{1} << scale);
  }
  // Throws DomainError for the boundaries.
  CodePoint code_point() const { return CodePoint::make(numerator, scale); }
};

struct RateNeighbors {
  GridValue left;   // 2^-r floor(2^r target)
  GridValue right;  // 2^-r ceil(2^r target)
};

// The two rate-r grid values that bracket `target`. Requires 0 < target < 1
// and 1 <= r <= kMaxRate.
RateNeighbors neighbors_at_rate(double target, unsigned r);

// The code point in [lo, hi) with the fewest bits; among equally short ones,
// the smallest. Requires 0 <= lo < hi <= 1. Throws InvalidArgumentError for
// an empty interval or one too narrow to hold a code point of rate kMaxRate.
CodePoint shortest_in_interval(double lo, double hi);

// Wire form: rate byte followed by the numerator as ceil(R/8) big-endian
// bytes.
std::size_t wire_size(const CodePoint& cp) noexcept;
void append_wire(const CodePoint& cp, std::vector<std::uint8_t>& out);
// Reads one code point at `offset` and advances it. Throws
// ContainerTruncatedError when the input ends early and NonCanonicalError
// for a malformed numerator.
CodePoint read_wire(std::span<const std::uint8_t> in, std::size_t& offset);

}  // namespace vbq

template <>
struct std::hash<vbq::CodePoint> {
  std::size_t operator()(const vbq::CodePoint& cp) const noexcept {
    return std::hash<std::uint64_t>{}(cp.numerator() * 61 + cp.rate());
  }
};

#endif  // VBQ_DYADIC_HPP_
