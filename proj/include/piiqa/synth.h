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

#ifndef PIIQA_SYNTH_H_
#define PIIQA_SYNTH_H_

#include <array>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "piiqa/format_template.h"
#include "piiqa/pii_model.h"
#include "piiqa/random.h"
#include "piiqa/rca.h"

namespace piiqa {

inline constexpr std::array<std::string_view, 7> kDomains = {
    "finance", "health", "IT", "insurance", "media", "retail", "travel"};

struct GeneratedPrompt {
  std::string prompt;
  Annotations truth;  // ordered by span start
};

// Synthetic values and prompts from the reference templates and word lists.
// Templates compile on first use; safe to share across threads.
class Generator {
 public:
  explicit Generator(const ReferenceData& ref) : ref_(&ref) {}

  const ReferenceData& reference() const { return *ref_; }

  // Throws Error(kNoTemplate) when the type is not registered for the locale.
  const FormatTemplate& format_template(std::string_view locale,
                                        const PiiType& type) const;
  std::string gen_value(std::string_view locale, const PiiType& type,
                        Rng& rng) const;

  // Filler text around generated values, sized so the prompt lands in `bin`
  // under `bins`. Types are drawn uniformly from the locale registry.
  // Throws Error(kBinInfeasible) when the values alone overflow the bin.
  GeneratedPrompt gen_prompt(std::string_view locale, LengthBin bin,
                             std::size_t n_pii, Rng& rng,
                             const LengthBinConfig& bins = {}) const;
  GeneratedPrompt gen_prompt(std::string_view locale, LengthBin bin,
                             std::span<const PiiType> types, Rng& rng,
                             const LengthBinConfig& bins = {}) const;

 private:
  const ReferenceData* ref_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::string, PiiType>, FormatTemplate> cache_;
};

// Inclusive measure range of a bin.
std::pair<std::size_t, std::size_t> bin_range(LengthBin bin, const LengthBins& b);

}  // namespace piiqa

#endif  // PIIQA_SYNTH_H_
