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

#ifndef PIIQA_REPORTS_H_
#define PIIQA_REPORTS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "piiqa/agreement.h"
#include "piiqa/corpus.h"
#include "piiqa/metrics.h"
#include "piiqa/rca.h"
#include "piiqa/workflow.h"

// Tab-separated report files for the CLI and the JSON bodies behind the
// dashboard endpoints. Ratios print with six decimals; absent values as NA
// in TSV and null in JSON.
namespace piiqa::reports {

using nlohmann::json;

std::string ratio(std::optional<double> v);

// One line per locale x phase x grain.
std::string metrics_tsv(std::span<const MetricsReport> reports,
                        std::optional<Grain> grain = std::nullopt);
json metrics_json(std::span<const MetricsReport> reports);

struct TaskAgreement {
  std::string task_id;
  std::string locale;
  Phase phase = Phase::kPilot;
  std::size_t submissions = 0;
  double ira = 0.0;
  // Breakdown of the first two submissions (by id).
  AgreementBreakdown first_pair;
};

// Tasks with no submissions are skipped; one submission is an error
// (Error(kInsufficientSubmissions)).
std::vector<TaskAgreement> task_agreements(const Corpus& corpus, double tau,
                                           std::optional<Phase> phase = std::nullopt,
                                           std::optional<std::string> locale = std::nullopt);
std::string agreement_tsv(std::span<const TaskAgreement> rows);
std::string matrix_tsv(const AgreementMatrix& m);
json matrix_json(const AgreementMatrix& m);

std::string quality_tsv(std::span<const QualityScore> scores);
json quality_json(std::span<const QualityScore> scores, const QualityPolicy& policy);

std::string phase_report_tsv(std::span<const PhaseReport> reports);
json phase_report_json(std::span<const PhaseReport> reports);

std::string confusions_tsv(const std::map<Phase, std::vector<ConfusionPair>>& pairs);
std::string rca_tsv(const RcaReport& r);
json rca_json(const RcaReport& r);

std::string distributions_tsv(std::span<const DistributionReport> reports);
json distributions_json(std::span<const DistributionReport> reports);

}  // namespace piiqa::reports

#endif  // PIIQA_REPORTS_H_
