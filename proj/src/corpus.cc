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

#include "piiqa/corpus.h"

#include <algorithm>

#include "piiqa/error.h"

namespace piiqa {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::kPilot: return "pilot";
    case Phase::kTraining: return "training";
    case Phase::kProduction: return "production";
  }
  return "unknown";
}

Phase parse_phase(std::string_view name) {
  for (Phase p : kPhases) {
    if (to_string(p) == name) return p;
  }
  throw Error(Errc::kInvalidArgument, "unknown phase '" + std::string(name) + "'");
}

std::string_view to_string(TaskStatus status) {
  switch (status) {
    case TaskStatus::kCreated: return "created";
    case TaskStatus::kAssigned: return "assigned";
    case TaskStatus::kDualAnnotated: return "dual_annotated";
    case TaskStatus::kAccepted: return "accepted";
    case TaskStatus::kArbitration: return "arbitration";
    case TaskStatus::kReviewed: return "reviewed";
  }
  return "unknown";
}

TaskStatus parse_task_status(std::string_view name) {
  for (auto s : {TaskStatus::kCreated, TaskStatus::kAssigned,
                 TaskStatus::kDualAnnotated, TaskStatus::kAccepted,
                 TaskStatus::kArbitration, TaskStatus::kReviewed}) {
    if (to_string(s) == name) return s;
  }
  throw Error(Errc::kInvalidArgument,
              "unknown task status '" + std::string(name) + "'");
}

bool TaskState::allowed(TaskStatus from, TaskStatus to) {
  switch (from) {
    case TaskStatus::kCreated: return to == TaskStatus::kAssigned;
    case TaskStatus::kAssigned: return to == TaskStatus::kDualAnnotated;
    case TaskStatus::kDualAnnotated:
      return to == TaskStatus::kAccepted || to == TaskStatus::kArbitration;
    case TaskStatus::kArbitration: return to == TaskStatus::kReviewed;
    case TaskStatus::kAccepted:
    case TaskStatus::kReviewed:
      return false;
  }
  return false;
}

void TaskState::advance(TaskStatus to, std::int64_t at, std::string note) {
  if (!allowed(status_, to)) {
    throw Error(Errc::kInvalidState, "illegal transition " +
                                         std::string(to_string(status_)) +
                                         " -> " + std::string(to_string(to)));
  }
  history_.push_back(Transition{status_, to, at, std::move(note)});
  status_ = to;
}

TaskState TaskState::replay(const std::vector<Transition>& history) {
  TaskState state;
  for (const Transition& t : history) {
    if (t.from != state.status_) {
      throw Error(Errc::kInvalidState, "transition history is not contiguous");
    }
    state.advance(t.to, t.at, t.note);
  }
  return state;
}

std::string_view to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kMissingLabels: return "missing_labels";
    case ErrorCategory::kWrongLabelsAdded: return "wrong_labels_added";
    case ErrorCategory::kIncorrectSpan: return "incorrect_span";
  }
  return "unknown";
}

ErrorCategory parse_error_category(std::string_view name) {
  for (auto c : {ErrorCategory::kMissingLabels, ErrorCategory::kWrongLabelsAdded,
                 ErrorCategory::kIncorrectSpan}) {
    if (to_string(c) == name) return c;
  }
  throw Error(Errc::kInvalidArgument,
              "unknown error category '" + std::string(name) + "'");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kAcceptedAsIs: return "accepted_as_is";
    case Verdict::kCorrected: return "corrected";
    case Verdict::kRejected: return "rejected";
  }
  return "unknown";
}

Verdict parse_verdict(std::string_view name) {
  for (auto v : {Verdict::kAcceptedAsIs, Verdict::kCorrected, Verdict::kRejected}) {
    if (to_string(v) == name) return v;
  }
  throw Error(Errc::kInvalidArgument, "unknown verdict '" + std::string(name) + "'");
}

const Task* Corpus::find_task(std::string_view id) const {
  auto it = tasks_.find(std::string(id));
  return it == tasks_.end() ? nullptr : &it->second;
}

Task* Corpus::find_task(std::string_view id) {
  auto it = tasks_.find(std::string(id));
  return it == tasks_.end() ? nullptr : &it->second;
}

const Submission* Corpus::find_submission(std::string_view id) const {
  auto it = submissions_.find(std::string(id));
  return it == submissions_.end() ? nullptr : &it->second;
}

std::vector<const Submission*> Corpus::submissions_for(
    std::string_view task_id) const {
  std::vector<const Submission*> out;
  auto it = by_task_.find(task_id);
  if (it == by_task_.end()) return out;
  out.reserve(it->second.size());
  for (const std::string& id : it->second) out.push_back(&submissions_.at(id));
  return out;
}

const GroundTruth* Corpus::ground_truth_for(std::string_view task_id) const {
  auto it = ground_truths_.find(std::string(task_id));
  return it == ground_truths_.end() ? nullptr : &it->second;
}

const Review* Corpus::review_for(std::string_view task_id) const {
  auto it = review_by_task_.find(task_id);
  return it == review_by_task_.end() ? nullptr : &reviews_.at(it->second);
}

Task& Corpus::add_task(Task task) {
  if (tasks_.count(task.id)) {
    throw Error(Errc::kConflict, "duplicate task id " + task.id);
  }
  std::string id = task.id;
  return tasks_.emplace(std::move(id), std::move(task)).first->second;
}

Task& Corpus::put_task(Task task) {
  auto it = tasks_.find(task.id);
  if (it == tasks_.end()) return add_task(std::move(task));
  it->second = std::move(task);
  return it->second;
}

const Submission& Corpus::add_submission(Submission submission) {
  if (!tasks_.count(submission.task_id)) {
    throw Error(Errc::kUnknownTask,
                "submission " + submission.id + " references unknown task " +
                    submission.task_id);
  }
  if (submissions_.count(submission.id)) {
    throw Error(Errc::kConflict, "duplicate submission id " + submission.id);
  }
  auto& ids = by_task_[submission.task_id];
  ids.insert(std::upper_bound(ids.begin(), ids.end(), submission.id),
             submission.id);
  std::string id = submission.id;
  return submissions_.emplace(std::move(id), std::move(submission))
      .first->second;
}

const Review& Corpus::add_review(Review review) {
  if (!tasks_.count(review.task_id)) {
    throw Error(Errc::kUnknownTask, "review " + review.id +
                                        " references unknown task " +
                                        review.task_id);
  }
  const Submission* chosen = find_submission(review.chosen_submission_id);
  if (chosen == nullptr || chosen->task_id != review.task_id) {
    throw Error(Errc::kUnknownSubmission,
                "review " + review.id + " chooses submission '" +
                    review.chosen_submission_id + "' not attached to task " +
                    review.task_id);
  }
  if (reviews_.count(review.id)) {
    throw Error(Errc::kConflict, "duplicate review id " + review.id);
  }
  if (review_by_task_.count(review.task_id)) {
    throw Error(Errc::kConflict, "task " + review.task_id + " already reviewed");
  }
  review_by_task_[review.task_id] = review.id;
  std::string id = review.id;
  return reviews_.emplace(std::move(id), std::move(review)).first->second;
}

const GroundTruth& Corpus::put_ground_truth(GroundTruth gt) {
  if (!tasks_.count(gt.task_id)) {
    throw Error(Errc::kUnknownTask,
                "ground truth references unknown task " + gt.task_id);
  }
  std::string id = gt.task_id;
  auto& slot = ground_truths_[id];
  slot = std::move(gt);
  return slot;
}

}  // namespace piiqa
