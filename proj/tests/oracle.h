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

// Brute-force reference implementations, written independently of the
// library so the tests compare two derivations of the same number.

#ifndef PIIQA_TESTS_ORACLE_H_
#define PIIQA_TESTS_ORACLE_H_

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "piiqa/pii_model.h"

namespace piiqa::oracle {

inline std::set<std::size_t> indices(const Span& s) {
  std::set<std::size_t> out;
  for (std::size_t i = s.start; i < s.end; ++i) out.insert(i);
  return out;
}

inline std::size_t overlap(const Span& a, const Span& b) {
  const auto x = indices(a), y = indices(b);
  std::size_t n = 0;
  for (std::size_t i : x) n += y.count(i);
  return n;
}

inline double iou(const Span& a, const Span& b) {
  auto u = indices(a);
  const auto y = indices(b);
  u.insert(y.begin(), y.end());
  if (u.empty()) return 0.0;
  return static_cast<double>(overlap(a, b)) / static_cast<double>(u.size());
}

// Type labels in reading order, spelled out as one string per row.
inline std::vector<std::string> reading_order(const Annotations& anns) {
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, std::string>> v;
  for (const auto& a : anns) v.push_back({{a.span.start, a.span.end}, a.type.name});
  std::sort(v.begin(), v.end());
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.second);
  return out;
}

struct Row {
  bool reviewed = false;
  Annotations truth;
  Annotations submission;
};

struct Counts {
  std::size_t tp = 0, fn = 0, fp = 0, tn = 0;
};

// Enumerates rows: positives are rows with truth spans, negatives rows
// without. Fine: same labels in the same order. Coarse: some submitted label
// also occurs in the truth (two empty rows agree).
inline Counts count(const std::vector<Row>& rows, bool fine) {
  Counts c;
  for (const Row& r : rows) {
    if (!r.reviewed) continue;
    const auto t = reading_order(r.truth);
    const auto s = reading_order(r.submission);
    bool ok;
    if (fine) {
      ok = t == s;
    } else if (t.empty() && s.empty()) {
      ok = true;
    } else {
      ok = false;
      for (const auto& label : s) {
        if (std::find(t.begin(), t.end(), label) != t.end()) ok = true;
      }
    }
    if (!t.empty()) {
      (ok ? c.tp : c.fn) += 1;
    } else {
      (s.empty() ? c.tn : c.fp) += 1;
    }
  }
  return c;
}

inline std::optional<double> recall(const Counts& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

inline std::optional<double> fpr(const Counts& c) {
  if (c.fp + c.tn == 0) return std::nullopt;
  return static_cast<double>(c.fp) / static_cast<double>(c.fp + c.tn);
}

// Word count over the ASCII and common Unicode spaces, scanned by hand.
inline std::size_t words(const std::u32string& s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char32_t c : s) {
    const bool space = c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' ||
                       c == U'\u00A0' || c == U'\u3000' || c == U'\u2009';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

}  // namespace piiqa::oracle

#endif  // PIIQA_TESTS_ORACLE_H_
