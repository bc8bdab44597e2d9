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

#ifndef PIIQA_AGREEMENT_H_
#define PIIQA_AGREEMENT_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "piiqa/corpus.h"
#include "piiqa/pii_model.h"

namespace piiqa {

inline constexpr double kDefaultIouThreshold = 0.5;

// Shared index count of two half-open spans.
std::size_t overlap_1d(const Span& a, const Span& b);
// Intersection over union of the spans' index sets; 0 for disjoint spans.
double iou(const Span& a, const Span& b);

struct MatchedPair {
  std::size_t left = 0;
  std::size_t right = 0;
  double iou = 0.0;
};

struct SpanMatching {
  std::vector<MatchedPair> pairs;
  std::vector<std::size_t> unmatched_left;
  std::vector<std::size_t> unmatched_right;
};

// One-to-one greedy matching: candidate pairs with iou >= tau are taken in
// order of descending iou, ties by (left start, right start), then by the
// remaining span/type/text fields so the result does not depend on input
// order. Greedy differs from an optimal assignment only on contrived chains
// of equally-overlapping spans.
SpanMatching match_spans(std::span<const SpanAnnotation> left,
                         std::span<const SpanAnnotation> right, double tau);

struct AgreementBreakdown {
  double span_score = 0.0;
  double type_score = 0.0;
  double text_score = 0.0;
  double overall = 0.0;
};

// Component scores over max(|A|, |B|). Two "No PII Found" answers agree
// fully; one empty answer against a non-empty one scores 0.
// Throws Error(kTaskMismatch) for submissions of different tasks.
AgreementBreakdown pair_agreement(const Submission& a, const Submission& b,
                                  double tau = kDefaultIouThreshold);

// Mean overall score across all unordered submission pairs.
// Throws Error(kInsufficientSubmissions) for fewer than two submissions.
double task_agreement(std::span<const Submission* const> submissions,
                      double tau = kDefaultIouThreshold);
double task_agreement(std::span<const Submission> submissions,
                      double tau = kDefaultIouThreshold);

class AgreementMatrix {
 public:
  // Annotator ids, sorted.
  const std::vector<std::string>& annotators() const { return annotators_; }
  // Mean pairwise overall agreement on shared tasks; absent without support.
  std::optional<double> cell(const std::string& a, const std::string& b) const;
  std::size_t support(const std::string& a, const std::string& b) const;

  void add(const std::string& a, const std::string& b, double overall);
  void add_self(const std::string& a);

 private:
  using Key = std::pair<std::string, std::string>;
  static Key key(const std::string& a, const std::string& b);
  void note(const std::string& id);

  std::vector<std::string> annotators_;
  std::map<Key, double> sum_;
  std::map<Key, std::size_t> support_;
};

AgreementMatrix annotator_matrix(const Corpus& corpus,
                                 double tau = kDefaultIouThreshold);

}  // namespace piiqa

#endif  // PIIQA_AGREEMENT_H_
