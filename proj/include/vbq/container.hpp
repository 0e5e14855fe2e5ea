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

// Compressed container ("VBQ1").
//
// Layout, little-endian unless noted:
//   magic "VBQ1"            4 bytes
//   version                 u8 (= 1)
//   mode                    u8 (0 = header table, 1 = external table)
//   dimension count K       u64
//   prior                   tag u8 + parameters
//   header table mode:      u32 symbol count, then per symbol
//                           rate u8, numerator (ceil(R/8) bytes, big-endian),
//                           count u32
//   external table mode:    u32 CRC-32 of the canonical table bytes
//   payload bit length      u64
//   payload                 bytes, zero-padded to a byte boundary

#ifndef VBQ_CONTAINER_HPP_
#define VBQ_CONTAINER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vbq/entropy_codec.hpp"
#include "vbq/prior.hpp"

namespace vbq {

inline constexpr std::uint8_t kContainerVersion = 1;

enum class TableMode : std::uint8_t {
  kHeaderTable = 0,
  kExternalTable = 1,
};

struct CompressedContainer {
  TableMode mode = TableMode::kHeaderTable;
  PriorModel prior;
  std::uint64_t dimension_count = 0;
  // Present in header-table mode (empty when K = 0).
  std::optional<FrequencyTable> table;
  // Present in external-table mode.
  std::uint32_t table_checksum = 0;
  BitString payload;

  friend bool operator==(const CompressedContainer&,
                         const CompressedContainer&) = default;
};

struct ContainerSize {
  std::uint64_t header_bits = 0;   // everything except the payload bytes
  std::uint64_t payload_bits = 0;  // exact payload bit length
  std::uint64_t total_bits() const noexcept {
    return header_bits + payload_bits;
  }
};

std::vector<std::uint8_t> write_container(const CompressedContainer& c);

// Parses and validates framing. Throws ContainerMagicError,
// ContainerVersionError or ContainerTruncatedError; ParseError for other
// malformed fields.
CompressedContainer read_container(std::span<const std::uint8_t> bytes);

ContainerSize container_size(const CompressedContainer& c);

// Arithmetic-codes `symbols`. In header-table mode the table is built from
// the symbols themselves and `external` must be empty; in external-table mode
// `external` is required and only its checksum is stored.
CompressedContainer encode_container(std::span<const CodePoint> symbols,
                                     const PriorModel& prior, TableMode mode,
                                     const FrequencyTable* external = nullptr);

// Inverse of encode_container. External-table containers need the table;
// a checksum mismatch throws ContainerChecksumError.
std::vector<CodePoint> decode_container(
    const CompressedContainer& c, const FrequencyTable* external = nullptr);

}  // namespace vbq

#endif  // VBQ_CONTAINER_HPP_
