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

#ifndef PIIQA_WORKFLOW_H_
#define PIIQA_WORKFLOW_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "piiqa/corpus.h"
#include "piiqa/pii_model.h"
#include "piiqa/random.h"

namespace piiqa {

struct PhasePolicy {
  Phase phase = Phase::kPilot;
  double qa_sampling = 1.0;
  double ira_threshold = 0.85;
};

// pilot 1.0 / training 0.65 / production 0.12, threshold 0.85.
PhasePolicy default_policy(Phase phase);
// Throws Error(kSpecInvalid) when the sampling rate is outside the band for
// its phase or the threshold is outside [0.85, 1].
void validate(const PhasePolicy& policy);

struct QualityPolicy {
  double threshold = 0.85;
  std::size_t min_reviewed = 10;
  // Corrected-but-chosen submissions earn half credit.
  bool lenient = false;
};

struct WorkflowConfig {
  std::array<PhasePolicy, 3> phases = {default_policy(Phase::kPilot),
                                       default_policy(Phase::kTraining),
                                       default_policy(Phase::kProduction)};
  // locale -> phase -> policy; wins over `phases`.
  std::map<std::string, std::map<Phase, PhasePolicy>> locale_overrides;
  QualityPolicy quality;

  const PhasePolicy& policy(const std::string& locale, Phase phase) const;
  void validate() const;
};

struct Annotator {
  std::string id;
  // Empty means any locale.
  std::set<std::string> locales;
  bool qualified = true;
};

struct AnnotatorPool {
  std::vector<Annotator> annotators;
  // Tasks assigned so far, by annotator id.
  std::map<std::string, std::size_t> load;
};

// Picks the `count` least-loaded qualified annotators for the task's locale
// (ties by id), bumps their load and moves the task to assigned. The
// chosen ids are also written to the transition note.
// Throws Error(kInsufficientPool) or Error(kInvalidState).
std::vector<std::string> assign(Task& task, AnnotatorPool& pool,
                                std::int64_t at, std::size_t count = 2);

struct RouteDecision {
  TaskStatus to = TaskStatus::kAccepted;
  double ira = 0.0;
  // Set only when an agreed task was considered for audit sampling.
  std::optional<double> draw;
  bool audit = false;
};

// Pilot sends everything to arbitration. Otherwise ira below the threshold
// goes to arbitration outright; agreed tasks are audited when a draw from
// `sampler` falls below qa_sampling. The draw is kept in the transition note.
// Throws Error(kInvalidState) unless the task is dual_annotated, and
// Error(kInvalidArgument) for ira outside [0, 1].
RouteDecision route(Task& task, double ira, const PhasePolicy& policy,
                    Rng& sampler, std::int64_t at);

// Rubric categories a reviewer would log for `chosen` against the final
// ground truth: unmatched truth spans are missing labels, unmatched or
// mistyped chosen spans are wrong labels, inexact matches are span errors.
std::set<ErrorCategory> rubric_categories(const Annotations& chosen,
                                          const Annotations& ground_truth,
                                          double tau = 0.5);

// Stores the review and its ground truth and moves the task to reviewed.
// Throws Error(kUnknownTask), Error(kInvalidState) (task not in
// arbitration), Error(kUnknownSubmission), Error(kInvalidGroundTruth) and
// Error(kInvalidArgument) for a verdict inconsistent with its categories.
const GroundTruth& record_review(Corpus& corpus, Review review,
                                 const ReferenceData& ref, std::int64_t at);

struct QualityScore {
  std::string annotator_id;
  std::optional<double> score;
  std::size_t reviewed_count = 0;
  bool qualified = false;
};

QualityScore quality_score(const std::string& annotator_id, const Corpus& corpus,
                           const QualityPolicy& policy = {},
                           std::optional<Phase> phase = std::nullopt);
// Every annotator with at least one submission, sorted by id.
std::vector<QualityScore> quality_scores(const Corpus& corpus,
                                         const QualityPolicy& policy = {},
                                         std::optional<Phase> phase = std::nullopt);

struct LocaleReviewStats {
  std::size_t accepted_as_is = 0;
  std::size_t corrected = 0;
  std::size_t rejected = 0;
  // Indexed by ErrorCategory.
  std::array<std::size_t, 3> categories{};

  std::size_t reviewed() const { return accepted_as_is + corrected + rejected; }
};

struct PhaseReport {
  Phase phase = Phase::kPilot;
  std::map<std::string, LocaleReviewStats> by_locale;
  LocaleReviewStats total;
};

PhaseReport phase_report(const Corpus& corpus, Phase phase);

}  // namespace piiqa

#endif  // PIIQA_WORKFLOW_H_
