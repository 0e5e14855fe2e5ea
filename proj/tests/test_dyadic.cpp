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

#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "vbq/dyadic.hpp"
#include "vbq/error.hpp"
#include "vbq/random.hpp"

namespace vbq {
namespace {

TEST_CASE("canonical form strips trailing zero bits") {
  CHECK(CodePoint::make(2, 2) == CodePoint::make(1, 1));
  CHECK(CodePoint::make(6, 3) == CodePoint::make(3, 2));
  const CodePoint seven = CodePoint::make(7, 3);
  CHECK(seven.numerator() == 7);
  CHECK(seven.rate() == 3);
  CHECK(seven.to_bits() == "111");
  CHECK(CodePoint().value() == 0.5);
  CHECK(CodePoint().rate() == 1);
}

TEST_CASE("bit strings parse and print") {
  CHECK(CodePoint::from_bits("111") == CodePoint::make(7, 3));
  CHECK(CodePoint::from_bits("01").value() == 0.25);
  CHECK(CodePoint::from_bits("0001").rate() == 4);
  CHECK_THROWS_AS(CodePoint::from_bits("110"), NonCanonicalError);
  CHECK_THROWS_AS(CodePoint::from_bits(""), InvalidArgumentError);
  CHECK_THROWS_AS(CodePoint::from_bits("12"), InvalidArgumentError);
}

TEST_CASE("boundaries and oversized rates are rejected") {
  CHECK_THROWS_AS(CodePoint::make(0, 3), DomainError);
  CHECK_THROWS_AS(CodePoint::make(8, 3), DomainError);
  CHECK_THROWS_AS(CodePoint::make(1, kMaxRate + 1), InvalidArgumentError);
  CHECK_NOTHROW(CodePoint::make(1, kMaxRate));
}

TEST_CASE("value and complement are exact") {
  const CodePoint cp = CodePoint::make(5, 4);
  CHECK(cp.value() == 5.0 / 16.0);
  CHECK(cp.complement() == 11.0 / 16.0);
  const CodePoint tiny = CodePoint::make(1, 60);
  CHECK(tiny.value() == std::ldexp(1.0, -60));
  const CodePoint top = CodePoint::make((std::uint64_t{1} << 60) - 1, 60);
  CHECK(top.complement() == std::ldexp(1.0, -60));
}

TEST_CASE("ordering by value and by rate") {
  CHECK(CodePoint::make(1, 2) < CodePoint());
  CHECK(CodePoint::make(3, 2) > CodePoint::make(5, 3));
  CodePoint::RateOrder less;
  CHECK(less(CodePoint::make(3, 2), CodePoint::make(1, 3)));
  CHECK(less(CodePoint::make(1, 3), CodePoint::make(3, 3)));
  CHECK_FALSE(less(CodePoint(), CodePoint()));
}

TEST_CASE("grid neighbors bracket the target") {
  const RateNeighbors nb = neighbors_at_rate(0.3, 2);
  CHECK(nb.left.numerator == 1);
  CHECK(nb.right.numerator == 2);
  CHECK(nb.right.code_point() == CodePoint());
  const RateNeighbors low = neighbors_at_rate(0.1, 1);
  CHECK(low.left.is_zero());
  const RateNeighbors high = neighbors_at_rate(0.9, 1);
  CHECK(high.right.is_one());
  const RateNeighbors exact = neighbors_at_rate(0.75, 2);
  CHECK(exact.left.numerator == exact.right.numerator);
}

TEST_CASE("shortest code point in an interval") {
  CHECK(shortest_in_interval(0.0, 1.0) == CodePoint());
  CHECK(shortest_in_interval(0.6, 0.7) == CodePoint::make(5, 3));
  CHECK(shortest_in_interval(0.5, 0.51) == CodePoint());
  // Half-open: the right end is excluded.
  CHECK(shortest_in_interval(0.26, 0.5) == CodePoint::make(3, 3));
  CHECK_THROWS_AS(shortest_in_interval(0.4, 0.4), InvalidArgumentError);
  CHECK_THROWS_AS(shortest_in_interval(0.0, 0x1p-62), InvalidArgumentError);
}

TEST_CASE("shortest code point matches an exhaustive search") {
  Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    double lo = rng.uniform();
    double hi = rng.uniform();
    if (lo > hi) std::swap(lo, hi);
    if (hi - lo < 1e-6) continue;
    CodePoint expected;
    bool found = false;
    for (unsigned r = 1; r <= 30 && !found; ++r) {
      for (std::uint64_t n = 1; n < (std::uint64_t{1} << r); n += 2) {
        const double v = std::ldexp(static_cast<double>(n), -static_cast<int>(r));
        if (v >= lo && v < hi) {
          expected = CodePoint::make(n, r);
          found = true;
          break;
        }
      }
    }
    REQUIRE(found);
    CHECK(shortest_in_interval(lo, hi) == expected);
  }
}

TEST_CASE("wire form round trips") {
  Rng rng(5);
  std::vector<std::uint8_t> bytes;
  std::vector<CodePoint> cps;
  for (int i = 0; i < 500; ++i) {
    const unsigned r = 1 + static_cast<unsigned>(rng.below(kMaxRate));
    const std::uint64_t n = (rng.next_u64() >> (64 - r)) | 1;
    cps.push_back(CodePoint::make(n, r));
    append_wire(cps.back(), bytes);
    CHECK(wire_size(cps.back()) == 1 + (r + 7) / 8);
  }
  std::size_t offset = 0;
  for (const CodePoint& cp : cps) CHECK(read_wire(bytes, offset) == cp);
  CHECK(offset == bytes.size());
  std::size_t at = 0;
  const std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + 1);
  CHECK_THROWS_AS(read_wire(truncated, at), ContainerTruncatedError);
  std::size_t at2 = 0;
  const std::vector<std::uint8_t> even = {3, 2};
  CHECK_THROWS_AS(read_wire(even, at2), NonCanonicalError);
}

TEST_CASE("neighbor examples") {
  const RateNeighbors a = neighbors_at_rate(0.6, 2);
  CHECK(a.left.code_point() == CodePoint());
  CHECK(a.left.code_point().rate() == 1);
  CHECK(a.right.code_point() == CodePoint::make(3, 2));
  const RateNeighbors b = neighbors_at_rate(0.3, 1);
  CHECK(b.left.is_zero());
  CHECK(b.right.code_point() == CodePoint());
}

TEST_CASE("neighbors bracket within one grid step") {
  Rng rng(17);
  for (int i = 0; i < 5000; ++i) {
    const double t = rng.uniform();
    if (t == 0.0) continue;
    const unsigned r = 1 + static_cast<unsigned>(rng.below(kMaxRate));
    const RateNeighbors nb = neighbors_at_rate(t, r);
    const double left = std::ldexp(static_cast<double>(nb.left.numerator),
                                   -static_cast<int>(nb.left.scale));
    const double right = std::ldexp(static_cast<double>(nb.right.numerator),
                                    -static_cast<int>(nb.right.scale));
    CHECK(left <= t);
    CHECK(t <= right);
    CHECK(right - left <= std::ldexp(1.0, -static_cast<int>(r)));
  }
}

TEST_CASE("binomial toy interval encodes as 111") {
  const CodePoint cp = shortest_in_interval(848.0 / 1024, 968.0 / 1024);
  CHECK(cp == CodePoint::make(7, 3));
  CHECK(cp.to_bits() == "111");
}

TEST_CASE("interval [0.30, 0.31) agrees with an exhaustive scan") {
  CodePoint expected;
  bool found = false;
  for (unsigned r = 1; r <= 12 && !found; ++r) {
    for (std::uint64_t n = 1; n < (std::uint64_t{1} << r) && !found; n += 2) {
      const double v = std::ldexp(static_cast<double>(n), -static_cast<int>(r));
      if (v >= 0.30 && v < 0.31) {
        expected = CodePoint::make(n, r);
        found = true;
      }
    }
  }
  REQUIRE(found);
  CHECK(shortest_in_interval(0.30, 0.31) == expected);
}

TEST_CASE("bit string round trip and density bound") {
  Rng rng(23);
  for (int i = 0; i < 3000; ++i) {
    const unsigned r = 1 + static_cast<unsigned>(rng.below(kMaxRate));
    const std::uint64_t n = (rng.next_u64() >> (64 - r)) | 1;
    const CodePoint cp = CodePoint::make(n, r);
    CHECK(cp.numerator() % 2 == 1);
    CHECK(CodePoint::from_bits(cp.to_bits()) == cp);

    double lo = rng.uniform(), hi = rng.uniform();
    if (lo > hi) std::swap(lo, hi);
    if (hi - lo < 1e-15) continue;
    const CodePoint s = shortest_in_interval(lo, hi);
    CHECK(s.value() >= lo);
    CHECK(s.value() < hi);
    CHECK(static_cast<double>(s.rate()) - 1.0 <= -std::log2(hi - lo));
  }
}

}  // namespace
}  // namespace vbq
