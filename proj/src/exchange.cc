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

#include "piiqa/exchange.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "piiqa/error.h"
#include "piiqa/text.h"

namespace piiqa::exchange {

namespace {

const std::set<std::string>& known_fields(const std::string& kind) {
  static const std::map<std::string, std::set<std::string>> kFields = {
      {"task",
       {"kind", "id", "locale", "domain", "phase", "prompt", "status", "history",
        "ira", "synthetic_truth"}},
      {"submission", {"kind", "id", "task_id", "annotator_id", "annotations"}},
      {"review",
       {"kind", "id", "task_id", "reviewer_id", "chosen_submission_id",
        "ground_truth", "error_categories", "verdict", "reviewed_at", "request_id"}},
      {"ground_truth", {"kind", "task_id", "review_id", "annotations"}},
  };
  return kFields.at(kind);
}

[[noreturn]] void schema(const std::string& why) {
  throw Error(Errc::kSchemaViolation, why);
}

const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) schema(std::string("missing field '") + name + "'");
  return *it;
}

std::string str(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) schema(std::string("field '") + name + "' must be a string");
  std::string s = v.get<std::string>();
  if (!text::is_valid_utf8(s)) schema(std::string("field '") + name + "' is not UTF-8");
  return s;
}

std::int64_t integer(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer()) schema(std::string("field '") + name + "' must be an integer");
  return v.get<std::int64_t>();
}

const Json& array(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) schema(std::string("field '") + name + "' must be an array");
  return v;
}

ExtraFields extras(const Json& j, const std::string& kind) {
  ExtraFields out;
  const auto& known = known_fields(kind);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) out[it.key()] = it.value().dump();
  }
  return out;
}

void put_extras(Json& j, const ExtraFields& extra) {
  for (const auto& [k, v] : extra) j[k] = Json::parse(v);
}

template <typename F>
auto reparse(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::kSchemaViolation) throw;
    throw Error(Errc::kSchemaViolation, e.what());
  }
}

}  // namespace

Json header() {
  Json j;
  j["kind"] = "header";
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  return j;
}

Json to_json(const SpanAnnotation& a) {
  Json j;
  j["span"] = Json::array({a.span.start, a.span.end});
  j["type"] = a.type.name;
  j["text"] = a.text;
  return j;
}

Json to_json(const Annotations& a) {
  Json j = Json::array();
  for (const auto& x : a) j.push_back(to_json(x));
  return j;
}

Json to_json(const Transition& t) {
  Json j;
  j["from"] = to_string(t.from);
  j["to"] = to_string(t.to);
  j["at"] = t.at;
  j["note"] = t.note;
  return j;
}

Json to_json(const Task& t) {
  Json j;
  j["kind"] = "task";
  j["id"] = t.id;
  j["locale"] = t.locale;
  j["domain"] = t.domain;
  j["phase"] = to_string(t.phase);
  j["prompt"] = t.prompt;
  j["status"] = to_string(t.state.status());
  j["history"] = Json::array();
  for (const auto& tr : t.state.history()) j["history"].push_back(to_json(tr));
  if (t.ira) j["ira"] = *t.ira;
  if (t.synthetic_truth) j["synthetic_truth"] = to_json(*t.synthetic_truth);
  put_extras(j, t.extra);
  return j;
}

Json to_json(const Submission& s) {
  Json j;
  j["kind"] = "submission";
  j["id"] = s.id;
  j["task_id"] = s.task_id;
  j["annotator_id"] = s.annotator_id;
  j["annotations"] = to_json(s.annotations);
  put_extras(j, s.extra);
  return j;
}

Json to_json(const Review& r) {
  Json j;
  j["kind"] = "review";
  j["id"] = r.id;
  j["task_id"] = r.task_id;
  j["reviewer_id"] = r.reviewer_id;
  j["chosen_submission_id"] = r.chosen_submission_id;
  j["ground_truth"] = to_json(r.ground_truth);
  j["error_categories"] = Json::array();
  for (ErrorCategory c : r.error_categories) j["error_categories"].push_back(to_string(c));
  j["verdict"] = to_string(r.verdict);
  j["reviewed_at"] = r.reviewed_at;
  j["request_id"] = r.request_id;
  put_extras(j, r.extra);
  return j;
}

Json to_json(const GroundTruth& g) {
  Json j;
  j["kind"] = "ground_truth";
  j["task_id"] = g.task_id;
  j["review_id"] = g.review_id;
  j["annotations"] = to_json(g.annotations);
  put_extras(j, g.extra);
  return j;
}

SpanAnnotation annotation_from_json(const Json& j, const ReferenceData& ref) {
  if (!j.is_object()) schema("annotation must be an object");
  const Json& span = field(j, "span");
  if (!span.is_array() || span.size() != 2 || !span[0].is_number_unsigned() ||
      !span[1].is_number_unsigned()) {
    schema("'span' must be [start, end] with non-negative integers");
  }
  SpanAnnotation a;
  a.span = {span[0].get<std::size_t>(), span[1].get<std::size_t>()};
  const std::string label = str(j, "type");
  try {
    a.type = ref.canonical_type(label);
  } catch (const Error& e) {
    throw Error(Errc::kUnknownLabel, e.what());
  }
  a.text = str(j, "text");
  return a;
}

Annotations annotations_from_json(const Json& j, const ReferenceData& ref) {
  if (!j.is_array()) schema("annotations must be an array");
  Annotations out;
  for (const auto& x : j) out.push_back(annotation_from_json(x, ref));
  return out;
}

Task task_from_json(const Json& j, const ReferenceData& ref) {
  Task t;
  t.id = str(j, "id");
  if (t.id.empty()) schema("empty task id");
  const std::string locale = str(j, "locale");
  if (!ref.has_locale(locale)) throw Error(Errc::kUnknownLocale, "unknown locale " + locale);
  t.locale = ref.locale(locale).code;
  t.domain = str(j, "domain");
  t.phase = reparse([&] { return parse_phase(str(j, "phase")); });
  t.prompt = str(j, "prompt");
  const TaskStatus status = reparse([&] { return parse_task_status(str(j, "status")); });
  std::vector<Transition> history;
  for (const auto& h : array(j, "history")) {
    Transition tr;
    tr.from = reparse([&] { return parse_task_status(str(h, "from")); });
    tr.to = reparse([&] { return parse_task_status(str(h, "to")); });
    tr.at = integer(h, "at");
    if (h.contains("note")) tr.note = str(h, "note");
    history.push_back(std::move(tr));
  }
  t.state = reparse([&] { return TaskState::replay(history); });
  if (t.state.status() != status) schema("status disagrees with history");
  if (j.contains("ira")) {
    const Json& ira = j["ira"];
    if (!ira.is_number()) schema("'ira' must be a number");
    t.ira = ira.get<double>();
    if (!(*t.ira >= 0.0 && *t.ira <= 1.0)) schema("'ira' outside [0, 1]");
  }
  if (j.contains("synthetic_truth")) {
    t.synthetic_truth = annotations_from_json(j["synthetic_truth"], ref);
  }
  t.extra = extras(j, "task");
  return t;
}

Submission submission_from_json(const Json& j, const ReferenceData& ref) {
  Submission s;
  s.id = str(j, "id");
  if (s.id.empty()) schema("empty submission id");
  s.task_id = str(j, "task_id");
  s.annotator_id = str(j, "annotator_id");
  s.annotations = annotations_from_json(array(j, "annotations"), ref);
  s.extra = extras(j, "submission");
  return s;
}

Review review_from_json(const Json& j, const ReferenceData& ref) {
  Review r;
  r.id = str(j, "id");
  if (r.id.empty()) schema("empty review id");
  r.task_id = str(j, "task_id");
  r.reviewer_id = str(j, "reviewer_id");
  r.chosen_submission_id = str(j, "chosen_submission_id");
  r.ground_truth = annotations_from_json(array(j, "ground_truth"), ref);
  for (const auto& c : array(j, "error_categories")) {
    if (!c.is_string()) schema("error categories must be strings");
    r.error_categories.insert(
        reparse([&] { return parse_error_category(c.get<std::string>()); }));
  }
  r.verdict = reparse([&] { return parse_verdict(str(j, "verdict")); });
  r.reviewed_at = integer(j, "reviewed_at");
  if (j.contains("request_id")) r.request_id = str(j, "request_id");
  r.extra = extras(j, "review");
  return r;
}

GroundTruth ground_truth_from_json(const Json& j, const ReferenceData& ref) {
  GroundTruth g;
  g.task_id = str(j, "task_id");
  g.review_id = j.contains("review_id") ? str(j, "review_id") : std::string();
  g.annotations = annotations_from_json(array(j, "annotations"), ref);
  g.extra = extras(j, "ground_truth");
  return g;
}

namespace {

void check_annotations(const Annotations& anns, const Task& task,
                       const ReferenceData& ref) {
  for (const auto& a : anns) {
    const Violation v = validate_annotation(task.prompt, a, task.locale, ref);
    if (v == Violation::kOk) continue;
    const std::string where = "[" + std::to_string(a.span.start) + ", " +
                              std::to_string(a.span.end) + ") " + a.type.name;
    switch (v) {
      case Violation::kSpanOutOfBounds:
        throw Error(Errc::kSchemaViolation, "span_out_of_bounds: " + where);
      case Violation::kTextMismatch:
        throw Error(Errc::kSchemaViolation, "text_mismatch: " + where);
      default:
        throw Error(Errc::kSchemaViolation, "type_not_in_locale: " + where);
    }
  }
}

const Task& task_of(const Corpus& corpus, const std::string& task_id) {
  const Task* t = corpus.find_task(task_id);
  if (t == nullptr) throw Error(Errc::kUnknownTask, "unknown task " + task_id);
  return *t;
}

}  // namespace

void apply_record(const Json& record, Corpus& corpus, const ReferenceData& ref,
                  bool replace_tasks) {
  if (!record.is_object()) schema("record must be an object");
  const std::string kind = str(record, "kind");
  if (kind == "header") {
    if (!record.contains("format") || record["format"] != kFormatName) {
      schema("not a piiqa-exchange header");
    }
    if (!record.contains("version") || record["version"] != kFormatVersion) {
      schema("unsupported exchange version");
    }
  } else if (kind == "task") {
    Task t = task_from_json(record, ref);
    if (!text::is_valid_utf8(t.prompt)) schema("prompt is not UTF-8");
    if (t.synthetic_truth) check_annotations(*t.synthetic_truth, t, ref);
    if (replace_tasks && corpus.find_task(t.id) != nullptr) {
      corpus.put_task(std::move(t));
    } else {
      corpus.add_task(std::move(t));
    }
  } else if (kind == "submission") {
    Submission s = submission_from_json(record, ref);
    check_annotations(s.annotations, task_of(corpus, s.task_id), ref);
    corpus.add_submission(std::move(s));
  } else if (kind == "review") {
    Review r = review_from_json(record, ref);
    check_annotations(r.ground_truth, task_of(corpus, r.task_id), ref);
    if ((r.verdict == Verdict::kAcceptedAsIs) != r.error_categories.empty()) {
      schema("error categories must be empty iff the verdict is accepted_as_is");
    }
    corpus.add_review(std::move(r));
  } else if (kind == "ground_truth") {
    GroundTruth g = ground_truth_from_json(record, ref);
    check_annotations(g.annotations, task_of(corpus, g.task_id), ref);
    if (!replace_tasks && corpus.ground_truth_for(g.task_id) != nullptr) {
      throw Error(Errc::kConflict, "duplicate ground truth for " + g.task_id);
    }
    corpus.put_ground_truth(std::move(g));
  } else {
    schema("unknown record kind '" + kind + "'");
  }
}

LoadReport import_stream(std::istream& in, Corpus& corpus, const ReferenceData& ref,
                         const RecordSink& sink) {
  static const std::vector<std::string> kOrder = {"task", "submission", "review",
                                                  "ground_truth"};
  LoadReport report;
  std::map<std::string, std::vector<std::pair<std::size_t, Json>>> pending;
  std::string line;
  std::size_t line_no = 0;
  auto reject = [&report](std::size_t at, std::string_view code, const std::string& msg) {
    report.rejected.push_back({at, std::string(code), msg});
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      reject(line_no, to_string(Errc::kSchemaViolation), e.what());
      continue;
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
      reject(line_no, to_string(Errc::kSchemaViolation), "record without a kind");
      continue;
    }
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "header") {
      try {
        apply_record(j, corpus, ref, false);
      } catch (const Error& e) {
        reject(line_no, to_string(e.code()), e.what());
      }
      continue;
    }
    if (std::find(kOrder.begin(), kOrder.end(), kind) == kOrder.end()) {
      reject(line_no, to_string(Errc::kSchemaViolation), "unknown record kind '" + kind + "'");
      continue;
    }
    pending[kind].emplace_back(line_no, std::move(j));
  }
  for (const auto& kind : kOrder) {
    for (auto& [at, j] : pending[kind]) {
      try {
        apply_record(j, corpus, ref, false);
      } catch (const Error& e) {
        std::string code(to_string(e.code()));
        std::string msg = e.what();
        // Annotation violations carry their own name in front of the message.
        if (e.code() == Errc::kSchemaViolation) {
          const auto colon = msg.find(':');
          const std::string head = msg.substr(0, colon);
          if (colon != std::string::npos &&
              (head == "span_out_of_bounds" || head == "text_mismatch" ||
               head == "type_not_in_locale")) {
            code = head;
          }
        }
        reject(at, code, msg);
        continue;
      }
      ++report.loaded;
      ++report.by_kind[kind];
      if (sink) sink(j);
    }
  }
  std::sort(report.rejected.begin(), report.rejected.end(),
            [](const RejectedRecord& a, const RejectedRecord& b) { return a.line < b.line; });
  return report;
}

LoadReport import_corpus(const std::filesystem::path& path, Corpus& corpus,
                         const ReferenceData& ref, const RecordSink& sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kUnreadableFile, "cannot read " + path.string());
  return import_stream(in, corpus, ref, sink);
}

void export_stream(const Corpus& corpus, std::ostream& out, const ExportFilter& filter) {
  out << header().dump() << '\n';
  for (const auto& [id, task] : corpus.tasks()) {
    if (filter.phase && task.phase != *filter.phase) continue;
    if (filter.locale && task.locale != *filter.locale) continue;
    out << to_json(task).dump() << '\n';
    for (const Submission* s : corpus.submissions_for(id)) {
      out << to_json(*s).dump() << '\n';
    }
    if (const Review* r = corpus.review_for(id)) out << to_json(*r).dump() << '\n';
    if (const GroundTruth* g = corpus.ground_truth_for(id)) {
      out << to_json(*g).dump() << '\n';
    }
  }
}

void export_corpus(const Corpus& corpus, const std::filesystem::path& path,
                   const ExportFilter& filter) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kUnwritableFile, "cannot write " + path.string());
  export_stream(corpus, out, filter);
  out.flush();
  if (!out) throw Error(Errc::kUnwritableFile, "write failed for " + path.string());
}

}  // namespace piiqa::exchange
