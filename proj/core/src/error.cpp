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

#include "scene_placer/error.hpp"

namespace scene_placer {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidGrid: return "InvalidGrid";
    case ErrorCode::kEmptyDrivableSpace: return "EmptyDrivableSpace";
    case ErrorCode::kInvalidBox: return "InvalidBox";
    case ErrorCode::kInvalidSample: return "InvalidSample";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kDegenerateFit: return "DegenerateFit";
    case ErrorCode::kUnknownClass: return "UnknownClass";
    case ErrorCode::kMaxAttemptsExceeded: return "MaxAttemptsExceeded";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kVersionError: return "VersionError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace scene_placer
