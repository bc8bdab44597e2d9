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

#ifndef PIIQA_PII_MODEL_H_
#define PIIQA_PII_MODEL_H_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace piiqa {

// Half-open interval of Unicode scalar offsets into a prompt.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end > start ? end - start : 0; }
  friend auto operator<=>(const Span&, const Span&) = default;
};

// Canonical upper-case PII type label, e.g. "NAME" or "AWS SECRET KEY".
struct PiiType {
  std::string name;

  PiiType() = default;
  explicit PiiType(std::string n) : name(std::move(n)) {}
  friend auto operator<=>(const PiiType&, const PiiType&) = default;
};

// One of the merged reporting categories (CREDIT CARD, TAX NUMBER, ...).
struct PiiCategory {
  std::string name;

  PiiCategory() = default;
  explicit PiiCategory(std::string n) : name(std::move(n)) {}
  friend auto operator<=>(const PiiCategory&, const PiiCategory&) = default;
};

struct SpanAnnotation {
  Span span;
  PiiType type;
  std::string text;

  friend bool operator==(const SpanAnnotation&, const SpanAnnotation&) = default;
};

using Annotations = std::vector<SpanAnnotation>;

struct Locale {
  std::string code;   // e.g. "pl-PL"
  std::string group;  // e.g. "pl"; nl-BE and nl-NL share "nl"
  std::vector<std::string> aliases;
  std::string description;
};

// True for tags of the form xx-YY or xx-YYY.
bool is_locale_code(std::string_view code);

struct RegistryEntry {
  std::string locale;
  PiiType type;
  bool locale_specific = false;
  std::string template_id;
  std::string description;
};

// Alias spelling (already normalized) -> canonical type name.
using AliasTable = std::map<std::string, std::string>;

// Trim, ASCII upper-case and collapse internal whitespace.
std::string normalize_label(std::string_view raw);

// Normalizes `raw_label` and resolves it through `aliases` against the set of
// canonical names. Throws Error(kUnknownLabel) when nothing matches, and
// Error(kInvalidArgument) for a blank label.
PiiType canonical_type(std::string_view raw_label, const AliasTable& aliases,
                       const std::set<PiiType>& canonical);

enum class Violation {
  kOk,
  kSpanOutOfBounds,
  kTextMismatch,
  kTypeNotInLocale,
};

std::string_view to_string(Violation v);

// Immutable reference tables: locales, the per-locale type registry, the
// category map, label aliases, value templates and generator word lists.
class ReferenceData {
 public:
  // Raw tab-separated file contents, one field per data/ file.
  struct Sources {
    std::string locales;
    std::string registry;
    std::string categories;
    std::string aliases;
    std::string templates;
    std::string wordlists;
    std::string confusions;
    std::string manifest;
  };

  // Throws Error(kReferenceData) on inconsistent tables.
  static ReferenceData parse(const Sources& sources);
  static ReferenceData load(const std::filesystem::path& dir);
  // Tables compiled into the library from data/.
  static const ReferenceData& builtin();

  const std::vector<Locale>& locales() const { return locales_; }
  bool has_locale(std::string_view code_or_alias) const;
  // Resolves aliases (ar-AFB -> ar-UAE). Throws Error(kUnknownLocale).
  const Locale& locale(std::string_view code_or_alias) const;

  // Types registered for the locale. Throws Error(kUnknownLocale).
  const std::set<PiiType>& registry_for(std::string_view locale) const;
  const std::vector<RegistryEntry>& entries() const { return entries_; }
  const RegistryEntry* find_entry(std::string_view locale,
                                  const PiiType& type) const;

  const std::set<PiiType>& types() const { return types_; }
  bool is_known_type(const PiiType& type) const { return types_.count(type) > 0; }
  bool locale_specific(const PiiType& type) const;

  PiiType canonical_type(std::string_view raw_label) const;
  // Total over the registry; throws Error(kUnknownLabel) for foreign types.
  const PiiCategory& category_of(const PiiType& type) const;
  std::set<PiiCategory> categories() const;
  const AliasTable& aliases() const { return aliases_; }

  const std::string* template_pattern(std::string_view template_id) const;
  const std::vector<std::string>* word_list(std::string_view locale,
                                            std::string_view list) const;

  // Frequently confused type pairs keyed by phase name.
  const std::vector<std::pair<PiiType, PiiType>>& confusions(
      std::string_view phase) const;

  // Declared entry counts per locale plus "total".
  const std::map<std::string, std::size_t>& manifest() const {
    return manifest_;
  }

 private:
  std::vector<Locale> locales_;
  std::map<std::string, std::size_t, std::less<>> locale_index_;
  std::vector<RegistryEntry> entries_;
  std::map<std::string, std::set<PiiType>, std::less<>> registry_;
  std::set<PiiType> types_;
  std::set<PiiType> locale_specific_;
  std::map<PiiType, PiiCategory> categories_;
  AliasTable aliases_;
  std::map<std::string, std::string, std::less<>> templates_;
  std::map<std::string, std::vector<std::string>, std::less<>> word_lists_;
  std::map<std::string, std::vector<std::pair<PiiType, PiiType>>, std::less<>>
      confusions_;
  std::map<std::string, std::size_t> manifest_;
};

// OK iff the span lies inside the prompt, `ann.text` equals the prompt slice
// and the type is registered for `locale`.
Violation validate_annotation(std::string_view prompt,
                              const SpanAnnotation& ann,
                              std::string_view locale,
                              const ReferenceData& ref);

}  // namespace piiqa

#endif  // PIIQA_PII_MODEL_H_
