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

// Little-endian field helpers shared by the binary formats.

#ifndef VBQ_SRC_BYTE_IO_HPP_
#define VBQ_SRC_BYTE_IO_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vbq/error.hpp"

namespace vbq::detail {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
}

inline void put_f64(std::vector<std::uint8_t>& out, double value) {
  put_le(out, std::bit_cast<std::uint64_t>(value));
}

inline void require(std::span<const std::uint8_t> in, std::size_t offset,
                    std::size_t count, const char* what) {
  if (offset > in.size() || in.size() - offset < count) {
    throw ContainerTruncatedError(std::string("input ends inside ") + what +
                                  " at byte " + std::to_string(offset));
  }
}

template <typename T>
T get_le(std::span<const std::uint8_t> in, std::size_t& offset,
         const char* what) {
  require(in, offset, sizeof(T), what);
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<T>(in[offset + i]) << (8 * i));
  }
  offset += sizeof(T);
  return value;
}

inline double get_f64(std::span<const std::uint8_t> in, std::size_t& offset,
                      const char* what) {
  return std::bit_cast<double>(get_le<std::uint64_t>(in, offset, what));
}

}  // namespace vbq::detail

#endif  // VBQ_SRC_BYTE_IO_HPP_
