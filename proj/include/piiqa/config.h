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

#ifndef PIIQA_CONFIG_H_
#define PIIQA_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "piiqa/metrics.h"
#include "piiqa/rca.h"
#include "piiqa/simulation.h"
#include "piiqa/workflow.h"

namespace piiqa {

// Operator configuration, read from a JSON file. Every key is optional;
// unknown keys are rejected so typos do not pass silently. See
// config/default.json for the full set.
struct Config {
  double tau = 0.5;
  WorkflowConfig workflow;
  LengthBinConfig bins;
  std::map<std::string, std::string> locale_merges;
  FprMode fpr_mode = FprMode::kRow;
  std::size_t top_k = 10;
  std::optional<std::filesystem::path> reference_data_dir;

  // Throw Error(kSpecInvalid) on bad values, Error(kUnreadableFile) for a
  // missing file.
  static Config from_json(const nlohmann::json& j);
  static Config load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  void validate() const;
};

// Corpus generation spec from JSON:
//   {"seed": 7, "locales": {"pl-PL": [80, 1000, 4000]}, "table_ranges": true,
//    "negative_fraction": 0.2, "bin_mix": [..4..], "pii_density": [...],
//    "domain_mix": {...}, "type_mix": {"NAME": 0.4},
//    "profiles": {"pilot": {"miss": 0.3, "confusion": 0.15, "spurious": 0.05,
//                           "span_jitter": 0, "jitter_rate": 0}},
//    "annotators_per_locale": 4, "annotators_per_task": 2}
CorpusSpec corpus_spec_from_json(const nlohmann::json& j, const ReferenceData& ref);

// Error profile used by `simulate` when none is given: noisy pilot, cleaner
// training, near-clean production.
std::array<ErrorRates, 3> default_phase_profiles();

}  // namespace piiqa

#endif  // PIIQA_CONFIG_H_
