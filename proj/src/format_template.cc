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

#include "piiqa/format_template.h"

#include <cctype>

#include "piiqa/error.h"
#include "piiqa/text.h"

namespace piiqa {

namespace {

std::vector<std::string> char_range(char lo, char hi) {
  std::vector<std::string> out;
  for (char c = lo; c <= hi; ++c) out.emplace_back(1, c);
  return out;
}

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::string escape_regex(std::string_view s) {
  static constexpr std::string_view kSpecial = R"(\^$.|?*+()[]{}/-)";
  std::string out;
  for (char c : s) {
    if (kSpecial.find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

// Character class of single ASCII characters.
std::string class_regex(const std::vector<std::string>& chars) {
  std::string out = "[";
  for (const auto& c : chars) out += escape_regex(c);
  return out + "]";
}

[[noreturn]] void bad(const std::string& id, const std::string& why) {
  throw Error(Errc::kReferenceData, "template " + id + ": " + why);
}

}  // namespace

FormatTemplate FormatTemplate::compile(std::string id, std::string_view pattern,
                                       const WordListLookup& lists) {
  FormatTemplate t;
  t.id_ = std::move(id);
  t.pattern_ = std::string(pattern);
  const std::u32string p = text::decode(pattern);
  std::size_t i = 0;
  auto add_chars = [&t](std::vector<std::string> chars) {
    Element e;
    e.regex = class_regex(chars);
    e.choices = std::move(chars);
    t.elements_.push_back(std::move(e));
  };
  auto add_literal = [&t](char32_t c) {
    Element e;
    std::string s;
    text::append_utf8(s, c);
    e.regex = escape_regex(s);
    e.choices = {s};
    t.elements_.push_back(std::move(e));
  };
  while (i < p.size()) {
    const char32_t c = p[i];
    if (c == '%') {
      if (i + 1 >= p.size()) bad(t.id_, "dangling %");
      switch (p[i + 1]) {
        case 'd': add_chars(char_range('0', '9')); break;
        case 'A': add_chars(char_range('A', 'Z')); break;
        case 'a': add_chars(char_range('a', 'z')); break;
        case 'X': add_chars(concat({char_range('A', 'Z'), char_range('0', '9')})); break;
        case 'x': add_chars(concat({char_range('a', 'z'), char_range('0', '9')})); break;
        case 'H': add_chars(concat({char_range('0', '9'), char_range('A', 'F')})); break;
        case 'h': add_chars(concat({char_range('0', '9'), char_range('a', 'f')})); break;
        case 'b':
          add_chars(concat({char_range('A', 'Z'), char_range('a', 'z'),
                            char_range('0', '9'), {"+", "/"}}));
          break;
        default: bad(t.id_, "unknown class");
      }
      i += 2;
    } else if (c == '[') {
      const std::size_t close = p.find(U']', i + 1);
      if (close == std::u32string::npos || close == i + 1) bad(t.id_, "bad set");
      std::vector<std::string> chars;
      for (std::size_t k = i + 1; k < close; ++k) {
        if (p[k] > 0x7f) bad(t.id_, "non-ASCII set member");
        if (k + 2 < close && p[k + 1] == '-') {
          if (p[k + 2] < p[k]) bad(t.id_, "reversed range");
          auto r = char_range(static_cast<char>(p[k]), static_cast<char>(p[k + 2]));
          chars.insert(chars.end(), r.begin(), r.end());
          k += 2;
        } else {
          chars.emplace_back(1, static_cast<char>(p[k]));
        }
      }
      add_chars(std::move(chars));
      i = close + 1;
    } else if (c == '<') {
      const std::size_t close = p.find(U'>', i + 1);
      if (close == std::u32string::npos) bad(t.id_, "unterminated list");
      const std::string name = text::encode(p.substr(i + 1, close - i - 1));
      const std::vector<std::string>* words = lists ? lists(name) : nullptr;
      if (words == nullptr || words->empty()) bad(t.id_, "no word list <" + name + ">");
      Element e;
      e.choices = *words;
      e.regex = "(?:";
      for (std::size_t k = 0; k < words->size(); ++k) {
        if (k) e.regex += '|';
        e.regex += escape_regex((*words)[k]);
      }
      e.regex += ')';
      t.elements_.push_back(std::move(e));
      i = close + 1;
    } else if (c == '{') {
      if (t.elements_.empty()) bad(t.id_, "quantifier without element");
      const std::size_t close = p.find(U'}', i + 1);
      if (close == std::u32string::npos) bad(t.id_, "unterminated quantifier");
      const std::string body = text::encode(p.substr(i + 1, close - i - 1));
      std::size_t lo = 0, hi = 0;
      const auto comma = body.find(',');
      try {
        lo = std::stoul(body.substr(0, comma));
        hi = comma == std::string::npos ? lo : std::stoul(body.substr(comma + 1));
      } catch (const std::exception&) {
        bad(t.id_, "bad quantifier {" + body + "}");
      }
      if (hi < lo) bad(t.id_, "bad quantifier {" + body + "}");
      t.elements_.back().min = lo;
      t.elements_.back().max = hi;
      i = close + 1;
    } else if (c == '\\') {
      if (i + 1 >= p.size()) bad(t.id_, "dangling escape");
      add_literal(p[i + 1]);
      i += 2;
    } else {
      add_literal(c);
      ++i;
    }
  }
  std::string re;
  for (const auto& e : t.elements_) {
    re += "(?:" + e.regex + ")";
    if (e.min != 1 || e.max != 1) {
      re += "{" + std::to_string(e.min) + "," + std::to_string(e.max) + "}";
    }
  }
  t.regex_ = std::regex(re, std::regex::ECMAScript | std::regex::optimize);
  return t;
}

std::string FormatTemplate::generate(Rng& rng) const {
  std::string out;
  for (const auto& e : elements_) {
    const auto n = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(e.min), static_cast<std::int64_t>(e.max)));
    for (std::size_t k = 0; k < n; ++k) {
      out += e.choices.size() == 1 ? e.choices[0] : e.choices[rng.below(e.choices.size())];
    }
  }
  return out;
}

bool FormatTemplate::matches(std::string_view value) const {
  return std::regex_match(value.begin(), value.end(), regex_);
}

}  // namespace piiqa
