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

#include "piiqa/synth.h"

#include <vector>

#include "piiqa/error.h"
#include "piiqa/text.h"

namespace piiqa {

const FormatTemplate& Generator::format_template(std::string_view locale,
                                                 const PiiType& type) const {
  const std::string code = ref_->locale(locale).code;
  const RegistryEntry* entry = ref_->find_entry(code, type);
  if (entry == nullptr) {
    throw Error(Errc::kNoTemplate, type.name + " is not registered for " + code);
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(code, type);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const std::string* pattern = ref_->template_pattern(entry->template_id);
  if (pattern == nullptr) {
    throw Error(Errc::kNoTemplate, "no template " + entry->template_id);
  }
  auto lookup = [this, &code](std::string_view list) {
    return ref_->word_list(code, list);
  };
  return cache_.emplace(key, FormatTemplate::compile(entry->template_id, *pattern, lookup))
      .first->second;
}

std::string Generator::gen_value(std::string_view locale, const PiiType& type,
                                 Rng& rng) const {
  return format_template(locale, type).generate(rng);
}

std::pair<std::size_t, std::size_t> bin_range(LengthBin bin, const LengthBins& b) {
  switch (bin) {
    case LengthBin::kS: return {1, b.m_min - 1};
    case LengthBin::kM: return {b.m_min, b.l_min - 1};
    case LengthBin::kL: return {b.l_min, b.xl_min - 1};
    case LengthBin::kXL: return {b.xl_min, b.xl_max};
  }
  return {1, 1};
}

GeneratedPrompt Generator::gen_prompt(std::string_view locale, LengthBin bin,
                                      std::size_t n_pii, Rng& rng,
                                      const LengthBinConfig& bins) const {
  const auto& registry = ref_->registry_for(ref_->locale(locale).code);
  const std::vector<PiiType> pool(registry.begin(), registry.end());
  std::vector<PiiType> types;
  for (std::size_t i = 0; i < n_pii; ++i) types.push_back(pool[rng.below(pool.size())]);
  return gen_prompt(locale, bin, types, rng, bins);
}

GeneratedPrompt Generator::gen_prompt(std::string_view locale, LengthBin bin,
                                      std::span<const PiiType> types, Rng& rng,
                                      const LengthBinConfig& bins) const {
  const std::string code = ref_->locale(locale).code;
  const LengthBins& b = bins.for_locale(code);
  auto measure = [&b](std::string_view s) {
    return b.count_chars ? text::count_non_space(s) : text::count_words(s);
  };
  const auto [lo, hi] = bin_range(bin, b);

  std::vector<std::string> values;
  std::size_t used = 0;
  for (const auto& t : types) {
    values.push_back(gen_value(code, t, rng));
    used += measure(values.back());
  }
  if (used > hi) {
    throw Error(Errc::kBinInfeasible,
                std::to_string(types.size()) + " values need " + std::to_string(used) +
                    " units, bin " + std::string(to_string(bin)) + " allows " +
                    std::to_string(hi));
  }
  const std::vector<std::string>* filler = ref_->word_list(code, "filler");
  if (filler == nullptr || filler->empty()) {
    throw Error(Errc::kReferenceData, "no filler words for " + code);
  }
  const std::size_t target = static_cast<std::size_t>(rng.between(
      static_cast<std::int64_t>(std::max(lo, used)), static_cast<std::int64_t>(hi)));

  // Tokens; indexes >= 0 into `values` mark PII slots, -1 is filler.
  std::vector<std::pair<std::string, int>> tokens;
  while (used < target) {
    std::string w = (*filler)[rng.below(filler->size())];
    std::size_t cost = measure(w);
    if (used + cost > target) {
      w = text::slice(w, 0, 1);
      cost = 1;
    }
    tokens.emplace_back(std::move(w), -1);
    used += cost;
  }
  for (std::size_t v = 0; v < values.size(); ++v) {
    const std::size_t at = rng.below(tokens.size() + 1);
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at),
                  {values[v], static_cast<int>(v)});
  }

  GeneratedPrompt out;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (k) {
      out.prompt += ' ';
      ++offset;
    }
    const std::size_t len = text::length(tokens[k].first);
    if (tokens[k].second >= 0) {
      const auto v = static_cast<std::size_t>(tokens[k].second);
      out.truth.push_back({{offset, offset + len}, types[v], tokens[k].first});
    }
    out.prompt += tokens[k].first;
    offset += len;
  }
  return out;
}

}  // namespace piiqa
