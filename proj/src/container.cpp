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

#include "vbq/container.hpp"

#include <array>
#include <cstring>

#include "byte_io.hpp"
#include "vbq/error.hpp"

namespace vbq {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'V', 'B', 'Q', '1'};

}  // namespace

std::vector<std::uint8_t> write_container(const CompressedContainer& c) {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.push_back(kContainerVersion);
  out.push_back(static_cast<std::uint8_t>(c.mode));
  detail::put_le(out, c.dimension_count);
  c.prior.serialize(out);
  if (c.mode == TableMode::kHeaderTable) {
    if (c.table) {
      c.table->serialize(out);
    } else {
      detail::put_le(out, std::uint32_t{0});
    }
  } else {
    detail::put_le(out, c.table_checksum);
  }
  detail::put_le(out, c.payload.bit_length());
  const auto& payload = c.payload.bytes();
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

CompressedContainer read_container(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw ContainerMagicError("not a VBQ container (bad magic)");
  }
  std::size_t offset = kMagic.size();
  const auto version = detail::get_le<std::uint8_t>(bytes, offset, "version");
  if (version != kContainerVersion) {
    throw ContainerVersionError("unsupported container version " +
                                std::to_string(version));
  }
  CompressedContainer c;
  const auto mode = detail::get_le<std::uint8_t>(bytes, offset, "mode");
  if (mode > 1) throw ParseError("unknown table mode " + std::to_string(mode));
  c.mode = static_cast<TableMode>(mode);
  c.dimension_count =
      detail::get_le<std::uint64_t>(bytes, offset, "dimension count");
  c.prior = PriorModel::deserialize(bytes, offset);
  if (c.mode == TableMode::kHeaderTable) {
    FrequencyTable table = FrequencyTable::deserialize(bytes, offset);
    if (!table.empty()) c.table = std::move(table);
  } else {
    c.table_checksum =
        detail::get_le<std::uint32_t>(bytes, offset, "table checksum");
  }
  const auto bit_length =
      detail::get_le<std::uint64_t>(bytes, offset, "payload length");
  const std::uint64_t payload_bytes = (bit_length + 7) / 8;
  if (bytes.size() - offset < payload_bytes) {
    throw ContainerTruncatedError(
        "payload needs " + std::to_string(payload_bytes) + " bytes, " +
        std::to_string(bytes.size() - offset) + " present");
  }
  if (bytes.size() - offset > payload_bytes) {
    throw ParseError("trailing bytes after the payload");
  }
  std::vector<std::uint8_t> payload(bytes.begin() + offset, bytes.end());
  if ((bit_length & 7) && payload_bytes > 0 &&
      (payload.back() & (0xFF >> (bit_length & 7))) != 0) {
    throw ParseError("nonzero padding bits after the payload");
  }
  c.payload = BitString(std::move(payload), bit_length);
  return c;
}

ContainerSize container_size(const CompressedContainer& c) {
  const std::uint64_t total_bytes = write_container(c).size();
  const std::uint64_t payload_bytes = c.payload.bytes().size();
  return ContainerSize{8 * (total_bytes - payload_bytes),
                       c.payload.bit_length()};
}

CompressedContainer encode_container(std::span<const CodePoint> symbols,
                                     const PriorModel& prior, TableMode mode,
                                     const FrequencyTable* external) {
  CompressedContainer c;
  c.mode = mode;
  c.prior = prior;
  c.dimension_count = symbols.size();
  if (mode == TableMode::kHeaderTable) {
    if (external != nullptr) {
      throw InvalidArgumentError(
          "header-table mode builds its own table; do not pass one");
    }
    if (!symbols.empty()) {
      c.table = build_frequency_table(symbols);
      c.payload = ac_encode(symbols, *c.table);
    }
  } else {
    if (external == nullptr) {
      throw InvalidArgumentError("external-table mode needs a table");
    }
    c.table_checksum = external->checksum();
    c.payload = ac_encode(symbols, *external);
  }
  return c;
}

std::vector<CodePoint> decode_container(const CompressedContainer& c,
                                        const FrequencyTable* external) {
  const FrequencyTable* table = nullptr;
  if (c.mode == TableMode::kHeaderTable) {
    if (c.dimension_count == 0) {
      if (!c.payload.empty()) {
        throw DecodeError("empty container carries a payload", 0);
      }
      return {};
    }
    if (!c.table) throw ParseError("header-table container has no table");
    table = &*c.table;
  } else {
    if (external == nullptr) {
      throw InvalidArgumentError(
          "external-table container needs the decoder's table");
    }
    if (external->checksum() != c.table_checksum) {
      throw ContainerChecksumError(
          "table checksum mismatch: container expects " +
          std::to_string(c.table_checksum) + ", table has " +
          std::to_string(external->checksum()));
    }
    table = external;
  }
  return ac_decode(c.payload, *table, c.dimension_count);
}

}  // namespace vbq
