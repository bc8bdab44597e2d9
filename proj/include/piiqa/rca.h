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

#ifndef PIIQA_RCA_H_
#define PIIQA_RCA_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "piiqa/corpus.h"
#include "piiqa/pii_model.h"

namespace piiqa {

enum class RcaCategory {
  kPiiType,
  kPiiSpan,
  kPiiText,
  kNumberOfPiis,
  kSamePiiOrder,
};
inline constexpr RcaCategory kRcaCategories[] = {
    RcaCategory::kPiiType, RcaCategory::kPiiSpan, RcaCategory::kPiiText,
    RcaCategory::kNumberOfPiis, RcaCategory::kSamePiiOrder};
std::string_view to_string(RcaCategory c);

// Root causes of `sub` disagreeing with `gt`; empty iff both hold the same
// annotations.
//   PII_TYPE        a matched pair differs in type, or the counts agree but
//                   the type multisets do not
//   PII_SPAN        a matched pair has iou < 1, an overlapping pair was left
//                   unmatched, or a same-typed span sits somewhere else
//   PII_TEXT        a matched pair's texts differ and neither contains the
//                   other (pure boundary shifts stay PII_SPAN)
//   NUMBER_OF_PIIS  the counts differ
//   SAME_PII_ORDER  same type multiset in a different order
std::set<RcaCategory> categorize(const Annotations& gt, const Annotations& sub,
                                 double tau = 0.5);
// Throws Error(kPromptMismatch) when the two belong to different tasks.
std::set<RcaCategory> categorize_disagreement(const GroundTruth& gt,
                                              const Submission& sub,
                                              double tau = 0.5);

// Unordered: `first` sorts before `second`.
struct ConfusionPair {
  PiiType first;
  PiiType second;
  std::size_t count = 0;
  Phase phase = Phase::kPilot;

  friend bool operator==(const ConfusionPair&, const ConfusionPair&) = default;
};

// Type mismatches of matched pairs, submission against ground truth, over
// reviewed tasks; ranked by count, ties alphabetical, cut to top_k.
std::map<Phase, std::vector<ConfusionPair>> confusion_pairs(
    const Corpus& corpus, std::size_t top_k = 10, double tau = 0.5);

enum class LengthBin { kS, kM, kL, kXL };
std::string_view to_string(LengthBin b);

// Lower bounds of M, L and XL plus the XL upper bound.
struct LengthBins {
  std::size_t m_min = 30;
  std::size_t l_min = 240;
  std::size_t xl_min = 1200;
  std::size_t xl_max = 3500;
  // Count non-space characters instead of words (for unsegmented scripts).
  bool count_chars = false;
};

struct LengthBinConfig {
  LengthBins defaults;
  std::map<std::string, LengthBins> by_locale;

  const LengthBins& for_locale(std::string_view locale) const;
  // Throws Error(kSpecInvalid) unless 0 < m_min < l_min < xl_min <= xl_max.
  void validate() const;
};

struct BinResult {
  LengthBin bin = LengthBin::kS;
  std::size_t count = 0;
  // Count exceeded xl_max and was clamped into XL.
  bool clamped = false;
};

BinResult length_bin(std::string_view prompt, const LengthBinConfig& cfg,
                     std::string_view locale);

enum class Axis { kDomain, kLengthBin, kPiiCategory };
std::string_view to_string(Axis a);
// Throws Error(kUnknownAxis).
Axis parse_axis(std::string_view name);

enum class Grouping { kLocaleGroup, kLocale, kAll };
Grouping parse_grouping(std::string_view name);

struct DistributionOptions {
  Grouping grouping = Grouping::kLocaleGroup;
  LengthBinConfig bins;
  // Extra locale -> group merges on top of the reference locale groups.
  std::map<std::string, std::string> merges;
};

struct DistributionReport {
  Axis axis = Axis::kDomain;
  std::string group;
  std::size_t total = 0;
  std::map<std::string, std::size_t> counts;
  std::map<std::string, double> proportions;
};

// Domain and length-bin axes count tasks; the category axis counts
// annotations of the review ground truth, falling back to synthetic truth.
// Groups without any count are left out. Clamped prompts add a line to
// `warnings`.
std::vector<DistributionReport> distributions(
    const Corpus& corpus, Axis axis, const ReferenceData& ref,
    const DistributionOptions& options = {},
    std::vector<std::string>* warnings = nullptr);

// Half-open range of review timestamps.
struct ReviewWindow {
  std::int64_t from = 0;
  std::int64_t to = 0;
};

struct RcaReport {
  ReviewWindow window;
  std::size_t reviewed_tasks = 0;
  // Submission rows compared against their ground truth.
  std::size_t rows = 0;
  std::size_t disagreement_rows = 0;
  std::map<RcaCategory, std::size_t> counts;
  // Ranked per phase, phases in order.
  std::vector<ConfusionPair> confusions;
  // Disagreement rows per locale.
  std::map<std::string, std::size_t> affected_locales;
  // Against the equally long window just before this one.
  std::map<RcaCategory, std::int64_t> trend;
  std::int64_t trend_total = 0;
  // Set when no review fell in the window.
  std::optional<std::string> warning;
};

RcaReport rca_report(const Corpus& corpus, ReviewWindow window,
                     double tau = 0.5, std::size_t top_k = 10);

}  // namespace piiqa

#endif  // PIIQA_RCA_H_
