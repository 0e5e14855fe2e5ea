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

#include "vbq/entropy_codec.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "byte_io.hpp"
#include "vbq/error.hpp"

namespace vbq {

// ---------------------------------------------------------------------------
// BitString

BitString::BitString(std::vector<std::uint8_t> bytes, std::uint64_t bit_length)
    : bytes_(std::move(bytes)), bit_length_(bit_length) {
  const std::uint64_t needed = (bit_length + 7) / 8;
  if (bytes_.size() < needed) {
    throw InvalidArgumentError("bit string of " + std::to_string(bit_length) +
                               " bits needs " + std::to_string(needed) +
                               " bytes, got " + std::to_string(bytes_.size()));
  }
  bytes_.resize(needed);
  if (bit_length & 7) {
    bytes_.back() &= static_cast<std::uint8_t>(0xFF << (8 - (bit_length & 7)));
  }
}

BitString BitString::from_string(std::string_view bits) {
  BitString out;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw InvalidArgumentError("bit string contains '" + std::string(1, c) +
                                 "'");
    }
    out.push_back(c == '1');
  }
  return out;
}

std::string BitString::to_string() const {
  std::string out;
  out.reserve(bit_length_);
  for (std::uint64_t i = 0; i < bit_length_; ++i) {
    out.push_back((*this)[i] ? '1' : '0');
  }
  return out;
}

void BitString::push_back(bool bit) {
  if ((bit_length_ & 7) == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80 >> (bit_length_ & 7));
  ++bit_length_;
}

void BitString::append(const BitString& other) {
  if ((bit_length_ & 7) == 0) {
    bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
    bit_length_ += other.bit_length_;
    return;
  }
  for (std::uint64_t i = 0; i < other.bit_length_; ++i) push_back(other[i]);
}

// ---------------------------------------------------------------------------
// FrequencyTable

FrequencyTable::FrequencyTable(Map entries) : entries_(std::move(entries)) {
  for (const auto& [cp, count] : entries_) {
    if (count == 0) {
      throw InvalidArgumentError("frequency table entry " + cp.to_bits() +
                                 " has zero count");
    }
    total_ += count;
  }
  if (total_ > std::numeric_limits<std::uint32_t>::max()) {
    throw CodingError("frequency table total " + std::to_string(total_) +
                      " exceeds 2^32 - 1");
  }
}

std::uint32_t FrequencyTable::count(const CodePoint& cp) const {
  const auto it = entries_.find(cp);
  if (it == entries_.end()) {
    throw CodingError("code point " + cp.to_bits() +
                      " is not in the frequency table");
  }
  return it->second;
}

void FrequencyTable::serialize(std::vector<std::uint8_t>& out) const {
  detail::put_le(out, static_cast<std::uint32_t>(entries_.size()));
  for (const auto& [cp, count] : entries_) {
    append_wire(cp, out);
    detail::put_le(out, count);
  }
}

FrequencyTable FrequencyTable::deserialize(std::span<const std::uint8_t> in,
                                           std::size_t& offset) {
  const auto n = detail::get_le<std::uint32_t>(in, offset, "table size");
  Map entries;
  const CodePoint::RateOrder before;
  for (std::uint32_t i = 0; i < n; ++i) {
    const CodePoint cp = read_wire(in, offset);
    const auto count = detail::get_le<std::uint32_t>(in, offset, "table count");
    if (!entries.empty() && !before(entries.rbegin()->first, cp)) {
      throw ParseError("frequency table entries are not in canonical order");
    }
    entries.emplace_hint(entries.end(), cp, count);
  }
  return FrequencyTable(std::move(entries));
}

std::uint32_t FrequencyTable::checksum() const {
  std::vector<std::uint8_t> bytes;
  serialize(bytes);
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

FrequencyTable build_frequency_table(std::span<const CodePoint> symbols,
                                     Smoothing smoothing) {
  if (symbols.empty()) {
    throw InvalidArgumentError("cannot build a frequency table from nothing");
  }
  std::unordered_map<CodePoint, std::uint64_t> counts;
  unsigned max_rate = 0;
  for (const CodePoint& cp : symbols) {
    ++counts[cp];
    max_rate = std::max(max_rate, cp.rate());
  }
  if (smoothing == Smoothing::kAddOne) {
    if (max_rate > kMaxSmoothedRate) {
      throw InvalidArgumentError(
          "add-one smoothing over rates up to " + std::to_string(max_rate) +
          " exceeds the supported alphabet (rate <= " +
          std::to_string(kMaxSmoothedRate) + ")");
    }
    for (unsigned r = 1; r <= max_rate; ++r) {
      for (std::uint64_t n = 1; n < (std::uint64_t{1} << r); n += 2) {
        ++counts[CodePoint::make(n, r)];
      }
    }
  }
  FrequencyTable::Map entries;
  for (const auto& [cp, count] : counts) {
    if (count > std::numeric_limits<std::uint32_t>::max()) {
      throw CodingError("symbol count exceeds 2^32 - 1");
    }
    entries.emplace(cp, static_cast<std::uint32_t>(count));
  }
  return FrequencyTable(std::move(entries));
}

// ---------------------------------------------------------------------------
// Range coder
//
// The coding interval is [low, low + range) scaled by 2^-64 and appended to
// the bytes already emitted. The range is renormalized into [2^56, 2^64), so
// the per-symbol truncation of range / total costs under 2^-24 relative
// width. Carries ripple back into the emitted bytes.

namespace {

constexpr std::uint64_t kRenormBound = std::uint64_t{1} << 56;

struct StaticModel {
  std::vector<std::uint64_t> cumulative;  // size n + 1
  std::uint64_t total = 0;

  explicit StaticModel(std::span<const std::uint32_t> counts) {
    if (counts.empty()) {
      throw InvalidArgumentError("coder model needs at least one symbol");
    }
    cumulative.resize(counts.size() + 1, 0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] == 0) {
        throw InvalidArgumentError("coder model has a zero frequency");
      }
      cumulative[i + 1] = cumulative[i] + counts[i];
    }
    total = cumulative.back();
    if (total > std::numeric_limits<std::uint32_t>::max()) {
      throw CodingError("coder model total exceeds 2^32 - 1");
    }
  }

  std::size_t size() const { return cumulative.size() - 1; }
};

// Narrows [low, low + range) to the sub-interval of `symbol`. Returns the
// amount added to low; the caller handles any carry.
std::uint64_t narrow(const StaticModel& model, std::size_t symbol,
                     std::uint64_t& range) {
  const std::uint64_t r = range / model.total;
  const std::uint64_t start = r * model.cumulative[symbol];
  if (symbol + 1 == model.size()) {
    range -= start;  // the last symbol absorbs the truncation remainder
  } else {
    range = r * (model.cumulative[symbol + 1] - model.cumulative[symbol]);
  }
  return start;
}

// The shortest dyadic interval [value, value + 2^(64 - bits)) inside
// [low, low + range). Emitting its `bits` leading bits keeps the code
// prefix-free, so the payload is never shorter than its information content.
// Fields: bits after the emitted bytes, value aligned to 64 bits, carry out.
struct Termination {
  unsigned bits = 0;
  std::uint64_t value = 0;
  bool carry = false;
};

Termination terminate(std::uint64_t low, std::uint64_t range) {
  __extension__ typedef unsigned __int128 u128;
  const u128 lo = low;
  const u128 end = lo + range;
  for (unsigned k = 1; k <= 64; ++k) {
    const u128 step = u128{1} << (64 - k);
    const u128 point = (lo + step - 1) / step * step;
    if (point + step <= end) {
      return Termination{k, static_cast<std::uint64_t>(point),
                         point >> 64 != 0};
    }
  }
  // range >= 1 always admits k = 64.
  return Termination{64, low, false};
}

void add_carry(std::vector<std::uint8_t>& out) {
  for (std::size_t i = out.size(); i-- > 0;) {
    if (++out[i] != 0) return;
  }
}

}  // namespace

BitString encode_indices(std::span<const std::uint32_t> indices,
                         std::span<const std::uint32_t> counts) {
  const StaticModel model(counts);
  std::vector<std::uint8_t> out;
  std::uint64_t low = 0;
  std::uint64_t range = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= model.size()) {
      throw CodingError("symbol index " + std::to_string(indices[i]) +
                        " at position " + std::to_string(i) +
                        " is outside the model");
    }
    const std::uint64_t start = narrow(model, indices[i], range);
    const std::uint64_t next = low + start;
    if (next < low) add_carry(out);
    low = next;
    while (range < kRenormBound) {
      out.push_back(static_cast<std::uint8_t>(low >> 56));
      low <<= 8;
      range <<= 8;
    }
  }
  const Termination t = terminate(low, range);
  if (t.carry) add_carry(out);
  for (unsigned b = 0; b < 8; ++b) {
    out.push_back(static_cast<std::uint8_t>(t.value >> (56 - 8 * b)));
  }
  const std::uint64_t length = 8 * (out.size() - 8) + t.bits;
  return BitString(std::move(out), length);
}

std::vector<std::uint32_t> decode_indices(const BitString& bits,
                                          std::span<const std::uint32_t> counts,
                                          std::size_t count) {
  const StaticModel model(counts);
  const auto& bytes = bits.bytes();
  std::size_t next_byte = 0;
  const auto read_byte = [&]() -> std::uint64_t {
    const std::size_t i = next_byte++;
    return i < bytes.size() ? bytes[i] : 0;
  };

  std::uint64_t window = 0;
  for (int i = 0; i < 8; ++i) window = (window << 8) | read_byte();
  std::uint64_t low = 0;
  std::uint64_t range = std::numeric_limits<std::uint64_t>::max();

  std::vector<std::uint32_t> out;
  out.reserve(std::min<std::size_t>(count, std::size_t{1} << 20));
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t offset = window - low;  // mod 2^64
    const std::uint64_t r = range / model.total;
    const std::uint64_t target = std::min(offset / r, model.total - 1);
    const auto it = std::upper_bound(model.cumulative.begin(),
                                     model.cumulative.end(), target);
    const auto symbol =
        static_cast<std::uint32_t>(it - model.cumulative.begin() - 1);
    out.push_back(symbol);
    low += narrow(model, symbol, range);
    while (range < kRenormBound) {
      window = (window << 8) | read_byte();
      low <<= 8;
      range <<= 8;
    }
  }

  // An encoder with the same model stops with the shortest dyadic interval
  // inside the final one; anything else means a damaged stream or a
  // different model.
  const std::uint64_t consumed = 8 * (next_byte - 8);
  const Termination t = terminate(low, range);
  const bool window_ok = window == t.value;
  const bool length_ok = bits.bit_length() == consumed + t.bits;
  if (!window_ok || !length_ok) {
    throw DecodeError("payload does not terminate where the model expects",
                      consumed);
  }
  // Carries make the check above slightly weaker than equality with the
  // encoder's output; compare against that directly.
  const BitString again = encode_indices(out, counts);
  if (again != bits) {
    std::uint64_t at = 0;
    const std::uint64_t common = std::min(again.bit_length(), bits.bit_length());
    while (at < common && again[at] == bits[at]) ++at;
    throw DecodeError("payload is not the encoding of its decoded symbols", at);
  }
  return out;
}

namespace {

struct IndexedTable {
  std::vector<std::uint32_t> counts;
  std::vector<CodePoint> symbols;
  std::unordered_map<CodePoint, std::uint32_t> index;

  explicit IndexedTable(const FrequencyTable& table) {
    counts.reserve(table.size());
    symbols.reserve(table.size());
    for (const auto& [cp, count] : table.entries()) {
      index.emplace(cp, static_cast<std::uint32_t>(symbols.size()));
      symbols.push_back(cp);
      counts.push_back(count);
    }
  }
};

}  // namespace

BitString ac_encode(std::span<const CodePoint> symbols,
                    const FrequencyTable& table) {
  if (table.empty()) {
    if (symbols.empty()) return BitString();
    throw CodingError("empty frequency table cannot code " +
                      std::to_string(symbols.size()) + " symbols");
  }
  const IndexedTable indexed(table);
  std::vector<std::uint32_t> indices(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const auto it = indexed.index.find(symbols[i]);
    if (it == indexed.index.end()) {
      throw CodingError("symbol " + symbols[i].to_bits() + " at index " +
                        std::to_string(i) +
                        " is not in the frequency table");
    }
    indices[i] = it->second;
  }
  return encode_indices(indices, indexed.counts);
}

std::vector<CodePoint> ac_decode(const BitString& bits,
                                 const FrequencyTable& table,
                                 std::size_t count) {
  if (table.empty()) {
    if (count == 0 && bits.empty()) return {};
    throw CodingError("empty frequency table cannot decode symbols");
  }
  const IndexedTable indexed(table);
  const auto indices = decode_indices(bits, indexed.counts, count);
  std::vector<CodePoint> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(indexed.symbols[i]);
  return out;
}

double information_content(std::span<const CodePoint> symbols,
                           const FrequencyTable& table) {
  const double log_total = std::log2(static_cast<double>(table.total()));
  double bits = 0.0;
  for (const CodePoint& cp : symbols) {
    bits += log_total - std::log2(static_cast<double>(table.count(cp)));
  }
  return bits;
}

// ---------------------------------------------------------------------------
// Concatenation codec

ConcatStream concat_encode(std::span<const CodePoint> symbols) {
  std::map<unsigned, std::uint32_t> histogram;
  for (const CodePoint& cp : symbols) ++histogram[cp.rate()];

  std::vector<std::uint32_t> counts;
  std::vector<std::uint8_t> header;
  header.push_back(static_cast<std::uint8_t>(histogram.size()));
  std::unordered_map<unsigned, std::uint32_t> index;
  for (const auto& [rate, count] : histogram) {
    index.emplace(rate, static_cast<std::uint32_t>(counts.size()));
    counts.push_back(count);
    header.push_back(static_cast<std::uint8_t>(rate));
    detail::put_le(header, count);
  }

  ConcatStream out;
  out.rate_stream = BitString(header, 8 * header.size());
  if (!symbols.empty()) {
    std::vector<std::uint32_t> indices;
    indices.reserve(symbols.size());
    for (const CodePoint& cp : symbols) indices.push_back(index.at(cp.rate()));
    out.rate_stream.append(encode_indices(indices, counts));
  }
  for (const CodePoint& cp : symbols) {
    // b_1..b_{R-1}: the terminal 1 is implied.
    for (unsigned b = cp.rate() - 1; b >= 1; --b) {
      out.payload.push_back((cp.numerator() >> b) & 1U);
    }
  }
  return out;
}

std::vector<CodePoint> concat_decode(const BitString& rate_stream,
                                     const BitString& payload,
                                     std::size_t count) {
  const auto& bytes = rate_stream.bytes();
  std::size_t offset = 0;
  const std::span<const std::uint8_t> in(bytes);
  const auto distinct =
      detail::get_le<std::uint8_t>(in, offset, "rate histogram");
  std::vector<unsigned> rates;
  std::vector<std::uint32_t> counts;
  for (unsigned i = 0; i < distinct; ++i) {
    const auto rate = detail::get_le<std::uint8_t>(in, offset, "rate entry");
    if (rate == 0 || rate > kMaxRate) {
      throw DecodeError("rate " + std::to_string(rate) + " out of range",
                        8 * (offset - 1));
    }
    rates.push_back(rate);
    counts.push_back(detail::get_le<std::uint32_t>(in, offset, "rate count"));
  }
  const std::uint64_t header_bits = 8 * offset;
  if (rate_stream.bit_length() < header_bits) {
    throw DecodeError("rate stream shorter than its header", header_bits);
  }

  std::vector<unsigned> decoded_rates;
  if (count > 0) {
    if (counts.empty()) {
      throw DecodeError("rate histogram is empty but symbols were requested",
                        header_bits);
    }
    BitString coded(std::vector<std::uint8_t>(bytes.begin() + offset,
                                              bytes.end()),
                    rate_stream.bit_length() - header_bits);
    try {
      for (auto i : decode_indices(coded, counts, count)) {
        decoded_rates.push_back(rates[i]);
      }
    } catch (const DecodeError& e) {
      throw DecodeError("rate stream: " + std::string(e.what()),
                        header_bits + e.bit_offset());
    }
  } else if (rate_stream.bit_length() != header_bits) {
    throw DecodeError("rate stream has data but no symbols were requested",
                      header_bits);
  }

  std::uint64_t expected = 0;
  for (unsigned r : decoded_rates) expected += r - 1;
  if (expected != payload.bit_length()) {
    throw DecodeError("payload holds " + std::to_string(payload.bit_length()) +
                          " bits but the rates need " +
                          std::to_string(expected),
                      std::min(expected, payload.bit_length()));
  }

  std::vector<CodePoint> out;
  out.reserve(decoded_rates.size());
  std::uint64_t pos = 0;
  for (unsigned r : decoded_rates) {
    std::uint64_t n = 0;
    for (unsigned b = 1; b < r; ++b) n = (n << 1) | (payload[pos++] ? 1U : 0U);
    out.push_back(CodePoint::make((n << 1) | 1U, r));
  }
  return out;
}

}  // namespace vbq
