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

#include "piiqa/store.h"

#include <algorithm>

#include "piiqa/error.h"

namespace piiqa {

namespace fs = std::filesystem;

namespace {

constexpr const char* kJournal = "journal.jsonl";
constexpr const char* kTransitions = "transitions.jsonl";

}  // namespace

Store::Store(fs::path dir, const ReferenceData& ref)
    : dir_(std::move(dir)), ref_(&ref) {}

std::unique_ptr<Store> Store::open(const fs::path& dir, const ReferenceData& ref) {
  std::error_code ec;
  fs::create_directories(dir / "reports", ec);
  if (ec) throw Error(Errc::kUnwritableFile, "cannot create " + dir.string());
  std::unique_ptr<Store> s(new Store(dir, ref));

  const fs::path journal = dir / kJournal;
  if (fs::exists(journal)) {
    std::ifstream in(journal, std::ios::binary);
    if (!in) throw Error(Errc::kUnreadableFile, "cannot read " + journal.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        const auto j = exchange::Json::parse(line);
        exchange::apply_record(j, s->corpus_, ref, /*replace_tasks=*/true);
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "task") {
          s->written_["task:" + j.at("id").get<std::string>()] = line;
        } else if (kind == "submission") {
          s->written_["submission:" + j.at("id").get<std::string>()] = line;
        } else if (kind == "review") {
          s->written_["review:" + j.at("task_id").get<std::string>()] = line;
        } else if (kind == "ground_truth") {
          s->written_["ground_truth:" + j.at("task_id").get<std::string>()] = line;
        }
      } catch (const std::exception& e) {
        throw Error(Errc::kSchemaViolation, journal.string() + ":" +
                                                std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  for (const auto& [id, task] : s->corpus_.tasks()) {
    s->observe(task);
    s->logged_transitions_[id] = task.state.history().size();
  }
  for (const auto& [id, r] : s->corpus_.reviews()) {
    s->clock_ = std::max(s->clock_, r.reviewed_at);
  }

  s->journal_.open(journal, std::ios::binary | std::ios::app);
  s->transitions_.open(dir / kTransitions, std::ios::binary | std::ios::app);
  if (!s->journal_ || !s->transitions_) {
    throw Error(Errc::kUnwritableFile, "cannot append to " + dir.string());
  }
  return s;
}

void Store::observe(const Task& task) {
  for (const auto& t : task.state.history()) clock_ = std::max(clock_, t.at);
}

void Store::append(const exchange::Json& record) {
  journal_ << record.dump() << '\n';
  journal_.flush();
  if (!journal_) throw Error(Errc::kUnwritableFile, "journal write failed");
}

void Store::note_transitions(const Task& task) {
  std::size_t& done = logged_transitions_[task.id];
  const auto& history = task.state.history();
  for (; done < history.size(); ++done) {
    exchange::Json j = exchange::to_json(history[done]);
    j["task_id"] = task.id;
    transitions_ << j.dump() << '\n';
  }
  transitions_.flush();
  if (!transitions_) throw Error(Errc::kUnwritableFile, "transition log write failed");
}

void Store::persist_task(const std::string& task_id) {
  const Task* t = corpus_.find_task(task_id);
  if (t == nullptr) throw Error(Errc::kUnknownTask, "unknown task " + task_id);
  const auto j = exchange::to_json(*t);
  std::string line = j.dump();
  auto& last = written_["task:" + task_id];
  if (last != line) {
    append(j);
    last = std::move(line);
  }
  note_transitions(*t);
  observe(*t);
}

void Store::persist_submission(const std::string& submission_id) {
  const Submission* s = corpus_.find_submission(submission_id);
  if (s == nullptr) throw Error(Errc::kUnknownSubmission, "unknown submission " + submission_id);
  auto& last = written_["submission:" + submission_id];
  if (!last.empty()) return;
  const auto j = exchange::to_json(*s);
  append(j);
  last = j.dump();
}

void Store::persist_review(const std::string& task_id) {
  if (const Review* r = corpus_.review_for(task_id)) {
    auto& last = written_["review:" + task_id];
    if (last.empty()) {
      const auto j = exchange::to_json(*r);
      append(j);
      last = j.dump();
    }
    clock_ = std::max(clock_, r->reviewed_at);
  }
  if (const GroundTruth* g = corpus_.ground_truth_for(task_id)) {
    const auto j = exchange::to_json(*g);
    std::string line = j.dump();
    auto& last = written_["ground_truth:" + task_id];
    if (last != line) {
      append(j);
      last = std::move(line);
    }
  }
}

void Store::persist_all() {
  for (const auto& [id, task] : corpus_.tasks()) {
    persist_task(id);
    for (const Submission* s : corpus_.submissions_for(id)) persist_submission(s->id);
    persist_review(id);
  }
}

exchange::LoadReport Store::ingest(const fs::path& file) {
  auto report = exchange::import_corpus(file, corpus_, *ref_);
  persist_all();
  return report;
}

void Store::compact() {
  const fs::path journal = dir_ / kJournal;
  const fs::path tmp = dir_ / "journal.jsonl.tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kUnwritableFile, "cannot write " + tmp.string());
    for (const auto& [id, task] : corpus_.tasks()) {
      out << exchange::to_json(task).dump() << '\n';
      for (const Submission* s : corpus_.submissions_for(id)) {
        out << exchange::to_json(*s).dump() << '\n';
      }
      if (const Review* r = corpus_.review_for(id)) out << exchange::to_json(*r).dump() << '\n';
      if (const GroundTruth* g = corpus_.ground_truth_for(id)) {
        out << exchange::to_json(*g).dump() << '\n';
      }
    }
    if (!out.flush()) throw Error(Errc::kUnwritableFile, "cannot write " + tmp.string());
  }
  journal_.close();
  std::error_code ec;
  fs::rename(tmp, journal, ec);
  if (ec) throw Error(Errc::kUnwritableFile, "cannot replace " + journal.string());
  journal_.open(journal, std::ios::binary | std::ios::app);
  if (!journal_) throw Error(Errc::kUnwritableFile, "cannot append to " + journal.string());
}

}  // namespace piiqa
