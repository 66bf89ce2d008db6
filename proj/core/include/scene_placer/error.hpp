// Copyright 2026 The Scene Placer Authors. All rights reserved.
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

#ifndef SCENE_PLACER_ERROR_HPP_
#define SCENE_PLACER_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace scene_placer {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kInvalidGrid,
  kEmptyDrivableSpace,
  kInvalidBox,
  kInvalidSample,
  kInsufficientData,
  kDegenerateFit,
  kUnknownClass,
  kMaxAttemptsExceeded,
  kEmptyMask,
  kParseError,
  kSchemaError,
  kFormatError,
  kVersionError,
  kIoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch without string
/// matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// JSON parse failure with the byte offset reported by the parser.
class ParseError : public Error {
 public:
  ParseError(const std::string &what, std::size_t byte_offset)
      : Error(ErrorCode::kParseError,
              what + " (byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace scene_placer

#endif  // SCENE_PLACER_ERROR_HPP_
