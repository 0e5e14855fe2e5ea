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

#include "vbq/dyadic.hpp"

#include <bit>
#include <cmath>

#include "vbq/error.hpp"

namespace vbq {

CodePoint CodePoint::make(std::uint64_t numerator, unsigned scale) {
  if (scale > kMaxRate) {
    throw InvalidArgumentError("code point scale " + std::to_string(scale) +
                               " exceeds the maximum rate " +
                               std::to_string(kMaxRate));
  }
  if (numerator == 0 || numerator >= (std::uint64_t{1} << scale)) {
    throw DomainError("dyadic value " + std::to_string(numerator) + "/2^" +
                      std::to_string(scale) + " is not inside (0, 1)");
  }
  const int tz = std::countr_zero(numerator);
  return CodePoint(numerator >> tz, scale - static_cast<unsigned>(tz));
}

CodePoint CodePoint::from_bits(std::string_view bits) {
  if (bits.empty()) throw InvalidArgumentError("empty bit string");
  if (bits.size() > kMaxRate) {
    throw InvalidArgumentError("bit string longer than " +
                               std::to_string(kMaxRate) + " bits");
  }
  std::uint64_t n = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw InvalidArgumentError("bit string contains '" + std::string(1, c) +
                                 "'");
    }
    n = (n << 1) | static_cast<std::uint64_t>(c - '0');
  }
  if (bits.back() != '1') {
    throw NonCanonicalError("bit string \"" + std::string(bits) +
                            "\" ends in 0; code points end in a terminal 1");
  }
  return CodePoint(n, static_cast<unsigned>(bits.size()));
}

std::string CodePoint::to_bits() const {
  std::string out(rate_, '0');
  for (unsigned i = 0; i < rate_; ++i) {
    if ((numerator_ >> (rate_ - 1 - i)) & 1U) out[i] = '1';
  }
  return out;
}

double CodePoint::value() const noexcept {
  return std::ldexp(static_cast<double>(numerator_), -static_cast<int>(rate_));
}

double CodePoint::complement() const noexcept {
  const std::uint64_t rest = (std::uint64_t{1} << rate_) - numerator_;
  return std::ldexp(static_cast<double>(rest), -static_cast<int>(rate_));
}

std::strong_ordering operator<=>(const CodePoint& a,
                                 const CodePoint& b) noexcept {
  const unsigned scale = a.rate_ > b.rate_ ? a.rate_ : b.rate_;
  const std::uint64_t an = a.numerator_ << (scale - a.rate_);
  const std::uint64_t bn = b.numerator_ << (scale - b.rate_);
  return an <=> bn;
}

RateNeighbors neighbors_at_rate(double target, unsigned r) {
  if (!(target > 0.0 && target < 1.0)) {
    throw DomainError("neighbor target must lie in (0, 1)");
  }
  if (r == 0 || r > kMaxRate) {
    throw InvalidArgumentError("neighbor rate must be in [1, " +
                               std::to_string(kMaxRate) + "]");
  }
  // Scaling by a power of two is exact, so floor/ceil see the true product.
  const double scaled = std::ldexp(target, static_cast<int>(r));
  return RateNeighbors{
      GridValue{static_cast<std::uint64_t>(std::floor(scaled)), r},
      GridValue{static_cast<std::uint64_t>(std::ceil(scaled)), r},
  };
}

CodePoint shortest_in_interval(double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi)) {
    throw InvalidArgumentError("interval [" + std::to_string(lo) + ", " +
                               std::to_string(hi) +
                               ") is empty or outside [0, 1]");
  }
  for (unsigned r = 1; r <= kMaxRate; ++r) {
    const std::uint64_t limit = std::uint64_t{1} << r;
    std::uint64_t n = static_cast<std::uint64_t>(
        std::ceil(std::ldexp(lo, static_cast<int>(r))));
    if (n == 0) n = 1;
    // n / 2^r < hi  <=>  n < ceil(hi * 2^r) for integer n.
    const auto end = static_cast<std::uint64_t>(
        std::ceil(std::ldexp(hi, static_cast<int>(r))));
    if (n < end && n < limit) {
      // Minimal r guarantees n is odd: an even n would have been found at
      // r - 1 already.
      return CodePoint::make(n, r);
    }
  }
  throw InvalidArgumentError("interval too narrow for any code point with at "
                             "most " + std::to_string(kMaxRate) + " bits");
}

std::size_t wire_size(const CodePoint& cp) noexcept {
  return 1 + (cp.rate() + 7) / 8;
}

void append_wire(const CodePoint& cp, std::vector<std::uint8_t>& out) {
  out.push_back(static_cast<std::uint8_t>(cp.rate()));
  const unsigned bytes = (cp.rate() + 7) / 8;
  for (unsigned i = bytes; i-- > 0;) {
    out.push_back(static_cast<std::uint8_t>(cp.numerator() >> (8 * i)));
  }
}

CodePoint read_wire(std::span<const std::uint8_t> in, std::size_t& offset) {
  if (offset >= in.size()) {
    throw ContainerTruncatedError("input ends before code point rate byte");
  }
  const unsigned rate = in[offset];
  if (rate == 0 || rate > kMaxRate) {
    throw NonCanonicalError("code point rate byte " + std::to_string(rate) +
                            " out of range");
  }
  const unsigned bytes = (rate + 7) / 8;
  if (in.size() - offset - 1 < bytes) {
    throw ContainerTruncatedError("input ends inside code point numerator");
  }
  std::uint64_t n = 0;
  for (unsigned i = 0; i < bytes; ++i) n = (n << 8) | in[offset + 1 + i];
  if ((n & 1U) == 0 || n >= (std::uint64_t{1} << rate)) {
    throw NonCanonicalError("numerator " + std::to_string(n) +
                            " is not a canonical rate-" +
                            std::to_string(rate) + " code point");
  }
  offset += 1 + bytes;
  return CodePoint::make(n, rate);
}

}  // namespace vbq
