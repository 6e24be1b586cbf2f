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

#ifndef PIPERATE_TAGS_H_
#define PIPERATE_TAGS_H_

#include <cstddef>
#include <optional>
#include <string_view>

namespace piperate {

// IO tag set. The numeric values double as tag indices for the sequence
// model and as dictionary-feature indices (none/defect/location/frequency).
enum class Tag : int { kO = 0, kDefect = 1, kLocation = 2, kFrequency = 3 };

inline constexpr std::size_t kNumTags = 4;

inline constexpr std::string_view tag_name(Tag t) {
  switch (t) {
    case Tag::kO: return "O";
    case Tag::kDefect: return "DEFECT";
    case Tag::kLocation: return "LOCATION";
    case Tag::kFrequency: return "FREQUENCY";
  }
  return "O";
}

inline std::optional<Tag> parse_tag(std::string_view s) {
  for (int i = 0; i < static_cast<int>(kNumTags); ++i) {
    if (tag_name(static_cast<Tag>(i)) == s) return static_cast<Tag>(i);
  }
  return std::nullopt;
}

}  // namespace piperate

#endif  // PIPERATE_TAGS_H_
