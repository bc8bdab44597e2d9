// Copyright 2026 The piiqa Authors.
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

#ifndef PIIQA_TEXT_H_
#define PIIQA_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>

// UTF-8 helpers. All offsets exposed by the library count Unicode scalar
// values, never bytes or UTF-16 units.
namespace piiqa::text {

// Throws Error(kInvalidUtf8) on malformed input, surrogates or overlongs.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view scalars);
void append_utf8(std::string& out, char32_t c);

bool is_valid_utf8(std::string_view utf8);

// Number of scalar values.
std::size_t length(std::string_view utf8);

// Substring [start, end) in scalar offsets. Requires start <= end <= length.
std::string slice(std::string_view utf8, std::size_t start, std::size_t end);

// Byte offset of scalar index `index` (index == length gives utf8.size()).
std::size_t byte_offset(std::string_view utf8, std::size_t index);

// Unicode White_Space property.
bool is_space(char32_t c);

// Maximal runs of non-whitespace.
std::size_t count_words(std::string_view utf8);
// Non-whitespace scalar values.
std::size_t count_non_space(std::string_view utf8);

// Trims and collapses every whitespace run into a single ASCII space.
std::string collapse_space(std::string_view utf8);

std::string ascii_upper(std::string_view s);

}  // namespace piiqa::text

#endif  // PIIQA_TEXT_H_
