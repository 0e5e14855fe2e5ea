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

#include "vbq/error.hpp"

namespace vbq {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidArgument: return "invalid-argument";
    case ErrorCategory::kDomain: return "domain";
    case ErrorCategory::kDegeneratePrior: return "degenerate-prior";
    case ErrorCategory::kNonCanonical: return "non-canonical";
    case ErrorCategory::kUnboundedSearch: return "unbounded-search";
    case ErrorCategory::kParse: return "parse";
    case ErrorCategory::kCoding: return "coding";
    case ErrorCategory::kDecode: return "decode";
    case ErrorCategory::kContainerMagic: return "container-magic";
    case ErrorCategory::kContainerVersion: return "container-version";
    case ErrorCategory::kContainerChecksum: return "container-checksum";
    case ErrorCategory::kContainerTruncated: return "container-truncated";
    case ErrorCategory::kIo: return "io";
  }
  return "unknown";
}

void rethrow_with_context(const Error& error, const std::string& context) {
  const std::string message = context + ": " + error.what();
  switch (error.category()) {
    case ErrorCategory::kInvalidArgument: throw InvalidArgumentError(message);
    case ErrorCategory::kDomain: throw DomainError(message);
    case ErrorCategory::kDegeneratePrior: throw DegeneratePriorError(message);
    case ErrorCategory::kNonCanonical: throw NonCanonicalError(message);
    case ErrorCategory::kUnboundedSearch: throw UnboundedSearchError(message);
    case ErrorCategory::kParse: throw ParseError(message);
    case ErrorCategory::kCoding: throw CodingError(message);
    case ErrorCategory::kIo: throw IoError(message);
    case ErrorCategory::kDecode: {
      const auto& decode = static_cast<const DecodeError&>(error);
      throw DecodeError(context + ": " + error.what(), decode.bit_offset());
    }
    case ErrorCategory::kContainerMagic: throw ContainerMagicError(message);
    case ErrorCategory::kContainerVersion: throw ContainerVersionError(message);
    case ErrorCategory::kContainerChecksum:
      throw ContainerChecksumError(message);
    case ErrorCategory::kContainerTruncated:
      throw ContainerTruncatedError(message);
  }
  throw Error(error.category(), message);
}

}  // namespace vbq
