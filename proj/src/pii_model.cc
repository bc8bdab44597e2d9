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

#include "piiqa/pii_model.h"

#include <fstream>
#include <sstream>

#include "piiqa/error.h"
#include "piiqa/text.h"

namespace piiqa {

namespace internal {
const std::map<std::string, std::string_view>& embedded_data();
}  // namespace internal

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Non-comment, non-blank rows of a TSV file with at least `min_fields`.
std::vector<std::vector<std::string>> read_rows(std::string_view content,
                                                std::string_view file,
                                                std::size_t min_fields) {
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 0;
  for (const std::string& raw : split(content, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() < min_fields) {
      throw Error(Errc::kReferenceData,
                  std::string(file) + ":" + std::to_string(line_no) +
                      ": expected " + std::to_string(min_fields) + " fields");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::kUnreadableFile, "cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool is_locale_code(std::string_view code) {
  if (code.size() != 5 && code.size() != 6) return false;
  auto lower = [](char c) { return c >= 'a' && c <= 'z'; };
  auto upper = [](char c) { return c >= 'A' && c <= 'Z'; };
  if (!lower(code[0]) || !lower(code[1]) || code[2] != '-') return false;
  for (std::size_t i = 3; i < code.size(); ++i) {
    if (!upper(code[i])) return false;
  }
  return true;
}

std::string normalize_label(std::string_view raw) {
  return text::ascii_upper(text::collapse_space(raw));
}

PiiType canonical_type(std::string_view raw_label, const AliasTable& aliases,
                       const std::set<PiiType>& canonical) {
  std::string label = normalize_label(raw_label);
  if (label.empty()) {
    throw Error(Errc::kInvalidArgument, "empty PII label");
  }
  PiiType type(label);
  if (canonical.count(type)) return type;
  if (auto it = aliases.find(label); it != aliases.end()) {
    PiiType target(it->second);
    if (canonical.count(target)) return target;
  }
  throw Error(Errc::kUnknownLabel, "unknown PII label '" + label + "'");
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::kOk: return "ok";
    case Violation::kSpanOutOfBounds: return "span_out_of_bounds";
    case Violation::kTextMismatch: return "text_mismatch";
    case Violation::kTypeNotInLocale: return "type_not_in_locale";
  }
  return "unknown";
}

ReferenceData ReferenceData::parse(const Sources& src) {
  ReferenceData ref;

  for (auto& row : read_rows(src.locales, "locales.tsv", 2)) {
    Locale loc;
    loc.code = row[0];
    loc.group = row[1];
    if (row.size() > 2 && !row[2].empty()) loc.aliases = split(row[2], ',');
    if (row.size() > 3) loc.description = row[3];
    if (!is_locale_code(loc.code)) {
      throw Error(Errc::kReferenceData, "malformed locale code " + loc.code);
    }
    const std::size_t index = ref.locales_.size();
    for (const std::string& key : loc.aliases) {
      if (!is_locale_code(key)) {
        throw Error(Errc::kReferenceData, "malformed locale alias " + key);
      }
      ref.locale_index_[key] = index;
    }
    ref.locale_index_[loc.code] = index;
    ref.registry_[loc.code];
    ref.locales_.push_back(std::move(loc));
  }

  for (auto& row : read_rows(src.categories, "categories.tsv", 2)) {
    ref.categories_[PiiType(row[0])] = PiiCategory(row[1]);
  }

  for (auto& row : read_rows(src.registry, "registry.tsv", 4)) {
    RegistryEntry e;
    e.locale = row[0];
    e.type = PiiType(row[1]);
    e.locale_specific = row[2] == "1";
    e.template_id = row[3];
    if (row.size() > 4) e.description = row[4];
    auto reg = ref.registry_.find(e.locale);
    if (reg == ref.registry_.end()) {
      throw Error(Errc::kReferenceData,
                  "registry entry for unconfigured locale " + e.locale);
    }
    if (!ref.categories_.count(e.type)) {
      throw Error(Errc::kReferenceData, "type without category: " + e.type.name);
    }
    if (!reg->second.insert(e.type).second) {
      throw Error(Errc::kReferenceData,
                  "duplicate registry entry " + e.locale + "/" + e.type.name);
    }
    ref.types_.insert(e.type);
    if (e.locale_specific) ref.locale_specific_.insert(e.type);
    ref.entries_.push_back(std::move(e));
  }

  for (auto& row : read_rows(src.aliases, "aliases.tsv", 2)) {
    ref.aliases_[normalize_label(row[0])] = row[1];
  }
  for (auto& row : read_rows(src.templates, "templates.tsv", 2)) {
    ref.templates_[row[0]] = row[1];
  }
  for (auto& row : read_rows(src.wordlists, "wordlists.tsv", 3)) {
    ref.word_lists_[row[0] + "/" + row[1]] = split(row[2], '|');
  }
  for (auto& row : read_rows(src.confusions, "confusions.tsv", 3)) {
    ref.confusions_[row[0]].emplace_back(PiiType(row[1]), PiiType(row[2]));
  }
  for (auto& row : read_rows(src.manifest, "registry.manifest", 2)) {
    ref.manifest_[row[0]] = static_cast<std::size_t>(std::stoul(row[1]));
  }

  for (const auto& e : ref.entries_) {
    if (!ref.templates_.count(e.template_id)) {
      throw Error(Errc::kReferenceData, "missing template " + e.template_id);
    }
  }
  return ref;
}

ReferenceData ReferenceData::load(const std::filesystem::path& dir) {
  Sources s;
  s.locales = read_file(dir / "locales.tsv");
  s.registry = read_file(dir / "registry.tsv");
  s.categories = read_file(dir / "categories.tsv");
  s.aliases = read_file(dir / "aliases.tsv");
  s.templates = read_file(dir / "templates.tsv");
  s.wordlists = read_file(dir / "wordlists.tsv");
  s.confusions = read_file(dir / "confusions.tsv");
  s.manifest = read_file(dir / "registry.manifest");
  return parse(s);
}

const ReferenceData& ReferenceData::builtin() {
  static const ReferenceData ref = [] {
    const auto& files = internal::embedded_data();
    auto get = [&](const char* name) { return std::string(files.at(name)); };
    Sources s;
    s.locales = get("locales.tsv");
    s.registry = get("registry.tsv");
    s.categories = get("categories.tsv");
    s.aliases = get("aliases.tsv");
    s.templates = get("templates.tsv");
    s.wordlists = get("wordlists.tsv");
    s.confusions = get("confusions.tsv");
    s.manifest = get("registry.manifest");
    return parse(s);
  }();
  return ref;
}

bool ReferenceData::has_locale(std::string_view code_or_alias) const {
  return locale_index_.find(code_or_alias) != locale_index_.end();
}

const Locale& ReferenceData::locale(std::string_view code_or_alias) const {
  auto it = locale_index_.find(code_or_alias);
  if (it == locale_index_.end()) {
    throw Error(Errc::kUnknownLocale,
                "unknown locale '" + std::string(code_or_alias) + "'");
  }
  return locales_[it->second];
}

const std::set<PiiType>& ReferenceData::registry_for(
    std::string_view locale_code) const {
  return registry_.find(locale(locale_code).code)->second;
}

const RegistryEntry* ReferenceData::find_entry(std::string_view locale_code,
                                               const PiiType& type) const {
  const std::string& code = locale(locale_code).code;
  for (const auto& e : entries_) {
    if (e.locale == code && e.type == type) return &e;
  }
  return nullptr;
}

bool ReferenceData::locale_specific(const PiiType& type) const {
  return locale_specific_.count(type) > 0;
}

PiiType ReferenceData::canonical_type(std::string_view raw_label) const {
  return piiqa::canonical_type(raw_label, aliases_, types_);
}

const PiiCategory& ReferenceData::category_of(const PiiType& type) const {
  auto it = categories_.find(type);
  if (it == categories_.end()) {
    throw Error(Errc::kUnknownLabel, "no category for type " + type.name);
  }
  return it->second;
}

std::set<PiiCategory> ReferenceData::categories() const {
  std::set<PiiCategory> out;
  for (const auto& type : types_) out.insert(categories_.at(type));
  return out;
}

const std::string* ReferenceData::template_pattern(
    std::string_view template_id) const {
  auto it = templates_.find(template_id);
  return it == templates_.end() ? nullptr : &it->second;
}

const std::vector<std::string>* ReferenceData::word_list(
    std::string_view locale_code, std::string_view list) const {
  std::string key = locale(locale_code).code + "/" + std::string(list);
  auto it = word_lists_.find(key);
  if (it == word_lists_.end()) {
    it = word_lists_.find("*/" + std::string(list));
  }
  return it == word_lists_.end() ? nullptr : &it->second;
}

const std::vector<std::pair<PiiType, PiiType>>& ReferenceData::confusions(
    std::string_view phase) const {
  static const std::vector<std::pair<PiiType, PiiType>> kNone;
  auto it = confusions_.find(phase);
  return it == confusions_.end() ? kNone : it->second;
}

Violation validate_annotation(std::string_view prompt,
                              const SpanAnnotation& ann,
                              std::string_view locale,
                              const ReferenceData& ref) {
  const Span& s = ann.span;
  if (s.start >= s.end || s.end > text::length(prompt)) {
    return Violation::kSpanOutOfBounds;
  }
  if (text::slice(prompt, s.start, s.end) != ann.text) {
    return Violation::kTextMismatch;
  }
  if (!ref.registry_for(locale).count(ann.type)) {
    return Violation::kTypeNotInLocale;
  }
  return Violation::kOk;
}

}  // namespace piiqa
