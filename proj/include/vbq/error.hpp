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

#ifndef VBQ_ERROR_HPP_
#define VBQ_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vbq {

// Every library error carries one of these categories. The CLI maps them to
// distinct exit codes, so the numeric values are part of the tool's contract.
enum class ErrorCategory : int {
  kInvalidArgument = 2,
  kDomain = 3,
  kDegeneratePrior = 4,
  kNonCanonical = 5,
  kUnboundedSearch = 6,
  kParse = 7,
  kCoding = 8,
  kDecode = 9,
  kContainerMagic = 10,
  kContainerVersion = 11,
  kContainerChecksum = 12,
  kContainerTruncated = 13,
  kIo = 14,
};

std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define VBQ_DEFINE_ERROR(Name, Category)                                  \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& message)                             \
        : Error(ErrorCategory::Category, message) {}                      \
  }

VBQ_DEFINE_ERROR(InvalidArgumentError, kInvalidArgument);
VBQ_DEFINE_ERROR(DomainError, kDomain);
VBQ_DEFINE_ERROR(DegeneratePriorError, kDegeneratePrior);
VBQ_DEFINE_ERROR(NonCanonicalError, kNonCanonical);
VBQ_DEFINE_ERROR(UnboundedSearchError, kUnboundedSearch);
VBQ_DEFINE_ERROR(ParseError, kParse);
VBQ_DEFINE_ERROR(CodingError, kCoding);
VBQ_DEFINE_ERROR(IoError, kIo);

#undef VBQ_DEFINE_ERROR

// Raised when a bitstream is inconsistent with the model used to read it.
class DecodeError : public Error {
 public:
  DecodeError(const std::string& message, std::uint64_t bit_offset)
      : Error(ErrorCategory::kDecode,
              message + " (at bit " + std::to_string(bit_offset) + ")"),
        bit_offset_(bit_offset) {}

  std::uint64_t bit_offset() const noexcept { return bit_offset_; }

 private:
  std::uint64_t bit_offset_;
};

// Container parse failures. Each failure mode has its own type so callers
// can tell a foreign file from a damaged one.
class ContainerError : public Error {
 public:
  using Error::Error;
};

class ContainerMagicError : public ContainerError {
 public:
  explicit ContainerMagicError(const std::string& message)
      : ContainerError(ErrorCategory::kContainerMagic, message) {}
};

class ContainerVersionError : public ContainerError {
 public:
  explicit ContainerVersionError(const std::string& message)
      : ContainerError(ErrorCategory::kContainerVersion, message) {}
};

class ContainerChecksumError : public ContainerError {
 public:
  explicit ContainerChecksumError(const std::string& message)
      : ContainerError(ErrorCategory::kContainerChecksum, message) {}
};

class ContainerTruncatedError : public ContainerError {
 public:
  explicit ContainerTruncatedError(const std::string& message)
      : ContainerError(ErrorCategory::kContainerTruncated, message) {}
};

// Rethrows `error` as the same concrete type with `context` prefixed to its
// message.
[[noreturn]] void rethrow_with_context(const Error& error,
                                       const std::string& context);

}  // namespace vbq

#endif  // VBQ_ERROR_HPP_
