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

#ifndef PIIQA_FORMAT_TEMPLATE_H_
#define PIIQA_FORMAT_TEMPLATE_H_

#include <cstddef>
#include <functional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "piiqa/random.h"

namespace piiqa {

// Looks up a named word list; nullptr when it does not exist.
using WordListLookup =
    std::function<const std::vector<std::string>*(std::string_view name)>;

// Value pattern with its own generator and validator.
//
//   %d digit   %A / %a upper / lower letter   %X / %x upper / lower alnum
//   %H / %h hex digit   %b base64 character
//   [..]       ASCII character set, ranges allowed ("[1-9]", "[STFG]")
//   <name>     one entry of a word list
//   {n} {m,n}  repeat the previous element
//   \c         literal c; anything else is literal too
class FormatTemplate {
 public:
  // Throws Error(kReferenceData) for malformed patterns or missing lists.
  static FormatTemplate compile(std::string id, std::string_view pattern,
                                const WordListLookup& lists);

  const std::string& id() const { return id_; }
  const std::string& pattern() const { return pattern_; }

  std::string generate(Rng& rng) const;
  bool matches(std::string_view value) const;

 private:
  struct Element {
    std::vector<std::string> choices;  // literal: one choice
    std::size_t min = 1;
    std::size_t max = 1;
    std::string regex;  // regex for one repetition
  };

  std::string id_;
  std::string pattern_;
  std::vector<Element> elements_;
  std::regex regex_;
};

}  // namespace piiqa

#endif  // PIIQA_FORMAT_TEMPLATE_H_
