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

#ifndef PIIQA_CORPUS_H_
#define PIIQA_CORPUS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "piiqa/pii_model.h"

namespace piiqa {

enum class Phase { kPilot, kTraining, kProduction };
inline constexpr std::array<Phase, 3> kPhases = {Phase::kPilot, Phase::kTraining,
                                                 Phase::kProduction};
std::string_view to_string(Phase phase);
// Throws Error(kInvalidArgument).
Phase parse_phase(std::string_view name);

enum class TaskStatus {
  kCreated,
  kAssigned,
  kDualAnnotated,
  kAccepted,
  kArbitration,
  kReviewed,
};
std::string_view to_string(TaskStatus status);
TaskStatus parse_task_status(std::string_view name);

struct Transition {
  TaskStatus from = TaskStatus::kCreated;
  TaskStatus to = TaskStatus::kCreated;
  std::int64_t at = 0;
  std::string note;

  friend bool operator==(const Transition&, const Transition&) = default;
};

// Lifecycle of one task:
//   created -> assigned -> dual_annotated -> {accepted | arbitration}
//   arbitration -> reviewed
class TaskState {
 public:
  TaskStatus status() const { return status_; }
  const std::vector<Transition>& history() const { return history_; }

  static bool allowed(TaskStatus from, TaskStatus to);
  // Throws Error(kInvalidState) for a transition not in the lifecycle.
  void advance(TaskStatus to, std::int64_t at, std::string note = {});

  // Rebuilds a state from a persisted history, re-checking every step.
  static TaskState replay(const std::vector<Transition>& history);

  friend bool operator==(const TaskState&, const TaskState&) = default;

 private:
  TaskStatus status_ = TaskStatus::kCreated;
  std::vector<Transition> history_;
};

enum class ErrorCategory { kMissingLabels, kWrongLabelsAdded, kIncorrectSpan };
std::string_view to_string(ErrorCategory c);
ErrorCategory parse_error_category(std::string_view name);

enum class Verdict { kAcceptedAsIs, kCorrected, kRejected };
std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view name);

// Unrecognized exchange-record fields, kept as serialized JSON values so
// they survive an import/export cycle.
using ExtraFields = std::map<std::string, std::string>;

struct Task {
  std::string id;
  std::string locale;
  std::string domain;
  Phase phase = Phase::kPilot;
  std::string prompt;
  TaskState state;
  std::optional<double> ira;
  // Exact annotations known to the generator; absent for human-sourced data.
  std::optional<Annotations> synthetic_truth;
  ExtraFields extra;

  friend bool operator==(const Task&, const Task&) = default;
};

// One annotator's answer for a task. Empty annotations mean "No PII Found".
struct Submission {
  std::string id;
  std::string task_id;
  std::string annotator_id;
  Annotations annotations;
  ExtraFields extra;

  friend bool operator==(const Submission&, const Submission&) = default;
};

struct GroundTruth {
  std::string task_id;
  Annotations annotations;
  std::string review_id;
  ExtraFields extra;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct Review {
  std::string id;
  std::string task_id;
  std::string reviewer_id;
  std::string chosen_submission_id;
  Annotations ground_truth;
  std::set<ErrorCategory> error_categories;
  Verdict verdict = Verdict::kAcceptedAsIs;
  std::int64_t reviewed_at = 0;
  std::string request_id;
  ExtraFields extra;

  friend bool operator==(const Review&, const Review&) = default;
};

// In-memory collection of tasks and everything attached to them. Keeps
// per-task indexes so lookups by task id stay cheap at corpus scale.
class Corpus {
 public:
  const std::map<std::string, Task>& tasks() const { return tasks_; }
  const std::map<std::string, Submission>& submissions() const {
    return submissions_;
  }
  const std::map<std::string, GroundTruth>& ground_truths() const {
    return ground_truths_;
  }
  const std::map<std::string, Review>& reviews() const { return reviews_; }

  const Task* find_task(std::string_view id) const;
  Task* find_task(std::string_view id);
  const Submission* find_submission(std::string_view id) const;
  // Submissions of a task ordered by submission id.
  std::vector<const Submission*> submissions_for(std::string_view task_id) const;
  const GroundTruth* ground_truth_for(std::string_view task_id) const;
  const Review* review_for(std::string_view task_id) const;

  // Insertions throw Error(kConflict) on duplicate ids and Error(kUnknownTask)
  // / Error(kUnknownSubmission) on dangling references.
  Task& add_task(Task task);
  const Submission& add_submission(Submission submission);
  const Review& add_review(Review review);
  // Replaces any previous ground truth of the task.
  const GroundTruth& put_ground_truth(GroundTruth gt);
  // Replaces an existing task (same id), keeping attachments.
  Task& put_task(Task task);

  std::size_t size() const {
    return tasks_.size() + submissions_.size() + ground_truths_.size() +
           reviews_.size();
  }

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.tasks_ == b.tasks_ && a.submissions_ == b.submissions_ &&
           a.ground_truths_ == b.ground_truths_ && a.reviews_ == b.reviews_;
  }

 private:
  std::map<std::string, Task> tasks_;
  std::map<std::string, Submission> submissions_;
  std::map<std::string, GroundTruth> ground_truths_;
  std::map<std::string, Review> reviews_;
  std::map<std::string, std::vector<std::string>, std::less<>> by_task_;
  std::map<std::string, std::string, std::less<>> review_by_task_;
};

}  // namespace piiqa

#endif  // PIIQA_CORPUS_H_
