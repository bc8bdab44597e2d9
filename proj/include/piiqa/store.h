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

#ifndef PIIQA_STORE_H_
#define PIIQA_STORE_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>

#include "piiqa/corpus.h"
#include "piiqa/exchange.h"
#include "piiqa/pii_model.h"

namespace piiqa {

// Directory-backed store.
//
//   journal.jsonl      exchange records, append-only; a later task record
//                      replaces an earlier one with the same id
//   transitions.jsonl  one line per task state transition, append-only
//   reports/           report files written by the CLI
//
// Every mutation appends whole lines and flushes before returning.
class Store {
 public:
  // Creates the directory if needed and replays the journal. Throws
  // Error(kUnreadableFile) / Error(kUnwritableFile), or the replay error of
  // a corrupt journal.
  static std::unique_ptr<Store> open(const std::filesystem::path& dir,
                                     const ReferenceData& ref);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path reports_dir() const { return dir_ / "reports"; }
  const ReferenceData& reference() const { return *ref_; }

  // Callers hold `mutex()` shared for reads and exclusive for writes.
  std::shared_mutex& mutex() const { return mu_; }
  const Corpus& corpus() const { return corpus_; }
  Corpus& mutable_corpus() { return corpus_; }

  // Next logical timestamp, strictly above every timestamp seen so far.
  std::int64_t tick() { return ++clock_; }
  std::int64_t& clock() { return clock_; }

  exchange::LoadReport ingest(const std::filesystem::path& file);

  // Appends the current record of each named entity. Tasks also append
  // their transitions not yet in the log.
  void persist_task(const std::string& task_id);
  void persist_submission(const std::string& submission_id);
  void persist_review(const std::string& task_id);
  // Persists every task whose record changed since the last write, plus
  // submissions, reviews and ground truths not yet written.
  void persist_all();

  // Rewrites the journal as a plain export of the current state.
  void compact();

 private:
  Store(std::filesystem::path dir, const ReferenceData& ref);
  void append(const exchange::Json& record);
  void note_transitions(const Task& task);
  void observe(const Task& task);

  std::filesystem::path dir_;
  const ReferenceData* ref_;
  Corpus corpus_;
  std::int64_t clock_ = 0;
  std::ofstream journal_;
  std::ofstream transitions_;
  // Per task: transitions already in transitions.jsonl.
  std::map<std::string, std::size_t> logged_transitions_;
  // Serialized record last written per entity key ("task:<id>", ...).
  std::map<std::string, std::string> written_;
  mutable std::shared_mutex mu_;
};

}  // namespace piiqa

#endif  // PIIQA_STORE_H_
