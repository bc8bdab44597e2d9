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

#ifndef PIIQA_EXCHANGE_H_
#define PIIQA_EXCHANGE_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "piiqa/corpus.h"
#include "piiqa/pii_model.h"

// Line-delimited JSON exchange format. See docs/exchange-format.md.
namespace piiqa::exchange {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatName = "piiqa-exchange";
inline constexpr int kFormatVersion = 1;

Json header();

Json to_json(const SpanAnnotation& a);
Json to_json(const Annotations& a);
Json to_json(const Transition& t);
Json to_json(const Task& t);
Json to_json(const Submission& s);
Json to_json(const Review& r);
Json to_json(const GroundTruth& g);

// Throw Error(kSchemaViolation) on missing or mistyped fields. Annotation
// labels are canonicalized but not checked against a prompt.
SpanAnnotation annotation_from_json(const Json& j, const ReferenceData& ref);
Annotations annotations_from_json(const Json& j, const ReferenceData& ref);
Task task_from_json(const Json& j, const ReferenceData& ref);
Submission submission_from_json(const Json& j, const ReferenceData& ref);
Review review_from_json(const Json& j, const ReferenceData& ref);
GroundTruth ground_truth_from_json(const Json& j, const ReferenceData& ref);

struct RejectedRecord {
  std::size_t line = 0;
  std::string code;  // span_out_of_bounds, conflict, schema_violation, ...
  std::string message;
};

struct LoadReport {
  std::size_t loaded = 0;
  std::map<std::string, std::size_t> by_kind;
  std::vector<RejectedRecord> rejected;
};

// Called for every record that made it into the corpus.
using RecordSink = std::function<void(const Json& record)>;

// Tasks are applied first, then submissions, reviews and ground truths, so
// record order inside the file does not matter. Bad records are skipped and
// reported with their 1-based line number.
LoadReport import_stream(std::istream& in, Corpus& corpus, const ReferenceData& ref,
                         const RecordSink& sink = {});
// Throws Error(kUnreadableFile).
LoadReport import_corpus(const std::filesystem::path& path, Corpus& corpus,
                         const ReferenceData& ref, const RecordSink& sink = {});

struct ExportFilter {
  std::optional<Phase> phase;
  std::optional<std::string> locale;
};

// Header line, then per task id: task, submissions (by id), review, ground
// truth.
void export_stream(const Corpus& corpus, std::ostream& out,
                   const ExportFilter& filter = {});
// Throws Error(kUnwritableFile).
void export_corpus(const Corpus& corpus, const std::filesystem::path& path,
                   const ExportFilter& filter = {});

// Applies one record the way the store journal replays it: a repeated task
// record replaces the earlier one. Throws on invalid records.
void apply_record(const Json& record, Corpus& corpus, const ReferenceData& ref,
                  bool replace_tasks);

}  // namespace piiqa::exchange

#endif  // PIIQA_EXCHANGE_H_
