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

#ifndef PIIQA_SIMULATION_H_
#define PIIQA_SIMULATION_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "piiqa/corpus.h"
#include "piiqa/pii_model.h"
#include "piiqa/random.h"
#include "piiqa/rca.h"
#include "piiqa/synth.h"
#include "piiqa/workflow.h"

namespace piiqa {

struct AnnotatorProfile {
  double miss_rate = 0.0;
  // True type -> distribution over reported types. A row may keep mass on
  // the true type itself; types without a row are reported unchanged.
  std::map<PiiType, std::vector<std::pair<PiiType, double>>> confusion;
  // Each kept span has its boundaries moved by up to this many characters
  // with probability jitter_rate.
  std::size_t span_jitter = 0;
  double jitter_rate = 1.0;
  // Chance per prompt of one false span on a filler token.
  double spurious_rate = 0.0;

  // Throws Error(kSpecInvalid).
  void validate() const;
};

// One simulated submission for a prompt with known truth. Spurious spans
// land only on whitespace-delimited tokens that overlap no truth span and
// take a random type from the locale registry.
Annotations simulate_annotator(std::string_view prompt, const Annotations& truth,
                               std::string_view locale,
                               const AnnotatorProfile& profile,
                               const ReferenceData& ref, Rng& rng);

// Scalar error rates expanded into a profile by build_profile.
struct ErrorRates {
  double miss = 0.0;
  double confusion = 0.0;
  double spurious = 0.0;
  std::size_t span_jitter = 0;
  double jitter_rate = 0.0;
};

// Confusable partners of a type come from the phase's frequent-confusion
// table, else from its reporting category, else the next registry type;
// `rates.confusion` is split evenly across them.
AnnotatorProfile build_profile(const ErrorRates& rates, Phase phase,
                               std::string_view locale, const ReferenceData& ref);

struct VolumeRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

// Published per-phase task volumes; absent for locales without a row.
std::optional<std::array<VolumeRange, 3>> published_volumes(std::string_view locale);

struct LocaleVolume {
  std::string locale;
  std::array<std::size_t, 3> tasks{};  // pilot, training, production
};

struct CorpusSpec {
  std::uint64_t seed = 0;
  std::vector<LocaleVolume> locales;
  // Counts must fall inside these when present.
  std::map<std::string, std::array<VolumeRange, 3>> ranges;
  // Empty means uniform over kDomains.
  std::map<std::string, double> domain_mix;
  std::array<double, 4> bin_mix = {0.45, 0.40, 0.13, 0.02};
  // P(n = 1), P(n = 2), ... for prompts that carry PII.
  std::vector<double> pii_density = {0.6, 0.3, 0.1};
  double negative_fraction = 0.2;
  // Listed types get their weight; what is left is spread evenly over the
  // rest of the locale registry.
  std::map<PiiType, double> type_mix;
  std::array<ErrorRates, 3> profiles;
  std::size_t annotators_per_locale = 4;
  std::size_t annotators_per_task = 2;
  LengthBinConfig bins;

  // Throws Error(kSpecInvalid).
  void validate(const ReferenceData& ref) const;
};

// Tasks with synthetic truth, assigned and annotated by simulated
// annotators (status dual_annotated). Pure function of the spec.
Corpus gen_corpus(const CorpusSpec& spec, const Generator& gen);

struct PipelineSummary {
  std::size_t routed = 0;
  std::size_t accepted = 0;
  std::size_t below_threshold = 0;
  std::size_t audited = 0;
  std::size_t reviewed = 0;
};

// Routes every dual_annotated task and lets a simulated reviewer settle
// arbitration with the synthetic truth as ground truth: the submission
// closest to the truth is chosen and the verdict follows from the rubric.
// Timestamps come from `clock`, which advances by one per transition.
PipelineSummary run_pipeline(Corpus& corpus, const WorkflowConfig& config,
                             const ReferenceData& ref, std::uint64_t seed,
                             std::int64_t& clock, double tau = 0.5);

// Share of synthetic-truth spans that submissions left unmatched.
std::optional<double> measured_miss_rate(const Corpus& corpus,
                                         std::optional<Phase> phase = std::nullopt,
                                         double tau = 0.5);

}  // namespace piiqa

#endif  // PIIQA_SIMULATION_H_
