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

#include "piiqa/text.h"

#include "piiqa/error.h"

namespace piiqa::text {

namespace {

// Decodes one scalar starting at utf8[pos]; returns the byte length or 0 on
// malformed input.
std::size_t decode_one(std::string_view utf8, std::size_t pos, char32_t* out) {
  const auto b0 = static_cast<unsigned char>(utf8[pos]);
  if (b0 < 0x80) {
    *out = b0;
    return 1;
  }
  std::size_t len;
  char32_t c;
  char32_t min;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2; c = b0 & 0x1F; min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3; c = b0 & 0x0F; min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4; c = b0 & 0x07; min = 0x10000;
  } else {
    return 0;
  }
  if (pos + len > utf8.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(utf8[pos + i]);
    if ((b & 0xC0) != 0x80) return 0;
    c = (c << 6) | (b & 0x3F);
  }
  if (c < min || c > 0x10FFFF || (c >= 0xD800 && c <= 0xDFFF)) return 0;
  *out = c;
  return len;
}

}  // namespace

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    char32_t c;
    const std::size_t n = decode_one(utf8, pos, &c);
    if (n == 0) {
      throw Error(Errc::kInvalidUtf8,
                  "malformed UTF-8 at byte " + std::to_string(pos));
    }
    out.push_back(c);
    pos += n;
  }
  return out;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::string encode(std::u32string_view scalars) {
  std::string out;
  out.reserve(scalars.size());
  for (char32_t c : scalars) append_utf8(out, c);
  return out;
}

bool is_valid_utf8(std::string_view utf8) {
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    char32_t c;
    const std::size_t n = decode_one(utf8, pos, &c);
    if (n == 0) return false;
    pos += n;
  }
  return true;
}

std::size_t length(std::string_view utf8) {
  std::size_t count = 0;
  for (char ch : utf8) {
    if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++count;
  }
  return count;
}

std::size_t byte_offset(std::string_view utf8, std::size_t index) {
  std::size_t seen = 0;
  for (std::size_t pos = 0; pos < utf8.size(); ++pos) {
    if ((static_cast<unsigned char>(utf8[pos]) & 0xC0) != 0x80) {
      if (seen == index) return pos;
      ++seen;
    }
  }
  if (seen == index) return utf8.size();
  throw Error(Errc::kInvalidArgument,
              "scalar offset " + std::to_string(index) + " past end of text");
}

std::string slice(std::string_view utf8, std::size_t start, std::size_t end) {
  if (start > end) {
    throw Error(Errc::kInvalidArgument, "slice start after end");
  }
  const std::size_t b = byte_offset(utf8, start);
  const std::size_t e = b + byte_offset(utf8.substr(b), end - start);
  return std::string(utf8.substr(b, e - b));
}

bool is_space(char32_t c) {
  switch (c) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

std::size_t count_words(std::string_view utf8) {
  std::size_t words = 0;
  bool in_word = false;
  for (char32_t c : decode(utf8)) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++words;
    }
  }
  return words;
}

std::size_t count_non_space(std::string_view utf8) {
  std::size_t n = 0;
  for (char32_t c : decode(utf8)) {
    if (!is_space(c)) ++n;
  }
  return n;
}

std::string collapse_space(std::string_view utf8) {
  std::string out;
  bool pending_space = false;
  for (char32_t c : decode(utf8)) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    append_utf8(out, c);
  }
  return out;
}

std::string ascii_upper(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
  }
  return out;
}

}  // namespace piiqa::text
