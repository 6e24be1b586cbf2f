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

#ifndef PIPERATE_ERROR_H_
#define PIPERATE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace piperate {

enum class ErrorCode {
  kEmptyDocument,
  kInvalidRating,
  kInvalidSpan,
  kDuplicateRecord,
  kGoldFormatError,
  kCorpusTooSmall,
  kInvalidArgument,
  kLexiconRequired,
  kLexiconFormatError,
  kGraphFormatError,
  kNumericalError,
  kEmptySequence,
  kAlignmentError,
  kModelFormatError,
  kUnknownFrequencyTerm,
  kInvalidWeight,
  kMissingGold,
  kConfigError,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this exception type; the code
// identifies the failure class and the message carries the detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace piperate

#endif  // PIPERATE_ERROR_H_
