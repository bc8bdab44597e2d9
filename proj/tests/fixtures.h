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

// Small builders shared by the unit tests.

#ifndef PIIQA_TESTS_FIXTURES_H_
#define PIIQA_TESTS_FIXTURES_H_

#include <string>
#include <string_view>
#include <vector>

#include "piiqa/corpus.h"
#include "piiqa/pii_model.h"
#include "piiqa/text.h"

namespace piiqa::testing {

inline SpanAnnotation ann(std::string_view prompt, std::size_t start, std::size_t end,
                          const std::string& type) {
  return {{start, end}, PiiType(type), text::slice(prompt, start, end)};
}

// Span annotation without a backing prompt; text is a placeholder.
inline SpanAnnotation bare(std::size_t start, std::size_t end, const std::string& type) {
  return {{start, end}, PiiType(type), std::string(end - start, 'x')};
}

inline Task make_task(const std::string& id, const std::string& prompt,
                      const std::string& locale = "pl-PL", Phase phase = Phase::kProduction) {
  Task t;
  t.id = id;
  t.locale = locale;
  t.domain = "finance";
  t.phase = phase;
  t.prompt = prompt;
  return t;
}

inline Submission make_submission(const std::string& id, const std::string& task_id,
                                  const std::string& annotator, Annotations anns) {
  Submission s;
  s.id = id;
  s.task_id = task_id;
  s.annotator_id = annotator;
  s.annotations = std::move(anns);
  return s;
}

// Walks a task through assignment and dual annotation.
inline void to_dual_annotated(Task& t, std::int64_t at = 1) {
  t.state.advance(TaskStatus::kAssigned, at);
  t.state.advance(TaskStatus::kDualAnnotated, at + 1);
}

}  // namespace piiqa::testing

#endif  // PIIQA_TESTS_FIXTURES_H_
