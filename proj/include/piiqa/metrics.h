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

#ifndef PIIQA_METRICS_H_
#define PIIQA_METRICS_H_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "piiqa/corpus.h"
#include "piiqa/pii_model.h"

namespace piiqa {

enum class Grain { kFine, kCoarse };
std::string_view to_string(Grain g);
Grain parse_grain(std::string_view name);

enum class Taxonomy { kAgreement, kDisagreement, kNotReviewed };
std::string_view to_string(Taxonomy t);

// kRow: negatives are rows whose ground truth is empty (default).
// kTypeInstance: negatives are (row, type) cells for every locale type absent
// from the ground truth; a submitted type outside the ground truth is a
// false positive. Grain-independent.
enum class FprMode { kRow, kTypeInstance };
std::string_view to_string(FprMode m);
FprMode parse_fpr_mode(std::string_view name);

struct RowVerdict {
  Taxonomy taxonomy = Taxonomy::kNotReviewed;
  bool fine_correct = false;
  bool coarse_correct = false;
  bool gt_positive = false;
  bool submission_positive = false;
  std::size_t type_fp = 0;
  std::size_t type_tn = 0;
};

// Canonical types ordered by span start, then span end.
std::vector<PiiType> type_sequence(std::span<const SpanAnnotation> annotations);

bool row_correct_fine(std::span<const PiiType> gt, std::span<const PiiType> sub);
// Non-empty multiset intersection; two empty sequences also count.
bool row_correct_coarse(std::span<const PiiType> gt,
                        std::span<const PiiType> sub);

// `gt == nullptr` marks a task nobody reviewed. `type_universe` (the
// locale registry) enables the type-instance FPR counts.
RowVerdict classify_row(const Annotations* gt, const Annotations& submission,
                        const std::set<PiiType>* type_universe = nullptr);

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// Not-reviewed rows are skipped.
ConfusionCounts count_rows(std::span<const RowVerdict> rows, Grain grain,
                           FprMode mode = FprMode::kRow);

// TP / (TP + FN) over rows with a non-empty ground truth; absent when there
// are none.
std::optional<double> recall(std::span<const RowVerdict> rows, Grain grain);
// FP / (FP + TN); absent when there are no negatives.
std::optional<double> fpr(std::span<const RowVerdict> rows, Grain grain,
                          FprMode mode = FprMode::kRow);

// Which annotations serve as the reference for a row.
enum class Reference {
  kReview,          // QA-established ground truth; unreviewed rows are N/A
  kSyntheticTruth,  // generator truth attached to the task
};
std::string_view to_string(Reference r);
Reference parse_reference(std::string_view name);

struct GroupBy {
  bool locale = true;
  bool phase = true;
};

struct MetricsOptions {
  GroupBy group_by;
  Reference reference = Reference::kReview;
  FprMode fpr_mode = FprMode::kRow;
  std::optional<Phase> phase;
  std::optional<std::string> locale;
};

struct MetricsReport {
  std::optional<std::string> locale;
  std::optional<Phase> phase;
  std::size_t rows = 0;
  std::size_t not_reviewed = 0;
  ConfusionCounts fine;
  ConfusionCounts coarse;
  std::optional<double> recall_fine;
  std::optional<double> recall_coarse;
  std::optional<double> fpr_fine;
  std::optional<double> fpr_coarse;
};

// One row verdict per submission; labels are re-canonicalized before
// comparison. Reports come back sorted by (locale, phase).
std::vector<RowVerdict> corpus_rows(const Corpus& corpus,
                                    const ReferenceData& ref,
                                    const MetricsOptions& options,
                                    std::vector<const Submission*>* row_keys = nullptr);
std::vector<MetricsReport> metrics_report(const Corpus& corpus,
                                          const ReferenceData& ref,
                                          const MetricsOptions& options = {});

enum class TrendMetric { kRecallFine, kFprFine, kRecallCoarse, kFprCoarse };

// "locale<TAB>pilot<TAB>training<TAB>production" per locale with three
// decimals, "-" where a phase has no value.
std::string render_phase_trend(std::span<const MetricsReport> reports,
                               TrendMetric metric);

}  // namespace piiqa

#endif  // PIIQA_METRICS_H_
