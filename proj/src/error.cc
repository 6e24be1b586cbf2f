// Copyright 2026 The piperate Authors.
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

#include "piperate/error.h"

namespace piperate {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kInvalidRating: return "InvalidRating";
    case ErrorCode::kInvalidSpan: return "InvalidSpan";
    case ErrorCode::kDuplicateRecord: return "DuplicateRecord";
    case ErrorCode::kGoldFormatError: return "GoldFormatError";
    case ErrorCode::kCorpusTooSmall: return "CorpusTooSmall";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kLexiconRequired: return "LexiconRequired";
    case ErrorCode::kLexiconFormatError: return "LexiconFormatError";
    case ErrorCode::kGraphFormatError: return "GraphFormatError";
    case ErrorCode::kNumericalError: return "NumericalError";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kAlignmentError: return "AlignmentError";
    case ErrorCode::kModelFormatError: return "ModelFormatError";
    case ErrorCode::kUnknownFrequencyTerm: return "UnknownFrequencyTerm";
    case ErrorCode::kInvalidWeight: return "InvalidWeight";
    case ErrorCode::kMissingGold: return "MissingGold";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace piperate
