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

#include "piiqa/workflow.h"

#include <algorithm>
#include <cstdio>
#include <tuple>

#include "piiqa/agreement.h"
#include "piiqa/error.h"

namespace piiqa {

namespace {

constexpr double kEpsilon = 1e-12;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

}  // namespace

PhasePolicy default_policy(Phase phase) {
  switch (phase) {
    case Phase::kPilot: return {phase, 1.0, 0.85};
    case Phase::kTraining: return {phase, 0.65, 0.85};
    case Phase::kProduction: return {phase, 0.12, 0.85};
  }
  return {};
}

void validate(const PhasePolicy& policy) {
  double lo = 1.0, hi = 1.0;
  if (policy.phase == Phase::kTraining) {
    lo = 0.5;
    hi = 0.8;
  } else if (policy.phase == Phase::kProduction) {
    lo = 0.10;
    hi = 0.15;
  }
  if (!(policy.qa_sampling >= lo - kEpsilon && policy.qa_sampling <= hi + kEpsilon)) {
    throw Error(Errc::kSpecInvalid,
                std::string(to_string(policy.phase)) + " qa_sampling " +
                    fmt("%g", policy.qa_sampling) + " outside [" + fmt("%g", lo) +
                    ", " + fmt("%g", hi) + "]");
  }
  if (!(policy.ira_threshold >= 0.85 - kEpsilon && policy.ira_threshold <= 1.0)) {
    throw Error(Errc::kSpecInvalid, "ira_threshold " +
                                        fmt("%g", policy.ira_threshold) +
                                        " outside [0.85, 1]");
  }
}

const PhasePolicy& WorkflowConfig::policy(const std::string& locale,
                                          Phase phase) const {
  auto it = locale_overrides.find(locale);
  if (it != locale_overrides.end()) {
    auto p = it->second.find(phase);
    if (p != it->second.end()) return p->second;
  }
  return phases[static_cast<std::size_t>(phase)];
}

void WorkflowConfig::validate() const {
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (phases[i].phase != kPhases[i]) {
      throw Error(Errc::kSpecInvalid, "phase policies out of order");
    }
    piiqa::validate(phases[i]);
  }
  for (const auto& [locale, by_phase] : locale_overrides) {
    for (const auto& [phase, p] : by_phase) {
      if (p.phase != phase) {
        throw Error(Errc::kSpecInvalid, "override for " + locale + " names the wrong phase");
      }
      piiqa::validate(p);
    }
  }
  if (quality.threshold < 0.0 || quality.threshold > 1.0) {
    throw Error(Errc::kSpecInvalid, "quality threshold outside [0, 1]");
  }
}

std::vector<std::string> assign(Task& task, AnnotatorPool& pool,
                                std::int64_t at, std::size_t count) {
  if (task.state.status() != TaskStatus::kCreated) {
    throw Error(Errc::kInvalidState, "task " + task.id + " is " +
                                         std::string(to_string(task.state.status())));
  }
  if (count < 2) throw Error(Errc::kInvalidArgument, "need at least two annotators");
  std::vector<const Annotator*> eligible;
  for (const auto& a : pool.annotators) {
    if (!a.qualified) continue;
    if (!a.locales.empty() && !a.locales.count(task.locale)) continue;
    eligible.push_back(&a);
  }
  if (eligible.size() < count) {
    throw Error(Errc::kInsufficientPool,
                "only " + std::to_string(eligible.size()) +
                    " qualified annotators for " + task.locale);
  }
  auto load = [&pool](const Annotator* a) {
    auto it = pool.load.find(a->id);
    return it == pool.load.end() ? std::size_t{0} : it->second;
  };
  std::partial_sort(eligible.begin(), eligible.begin() + count, eligible.end(),
                    [&](const Annotator* x, const Annotator* y) {
                      const auto lx = load(x), ly = load(y);
                      return lx != ly ? lx < ly : x->id < y->id;
                    });
  std::vector<std::string> ids;
  std::string note;
  for (std::size_t i = 0; i < count; ++i) {
    ids.push_back(eligible[i]->id);
    ++pool.load[eligible[i]->id];
    if (i) note += ',';
    note += eligible[i]->id;
  }
  task.state.advance(TaskStatus::kAssigned, at, note);
  return ids;
}

RouteDecision route(Task& task, double ira, const PhasePolicy& policy,
                    Rng& sampler, std::int64_t at) {
  if (task.state.status() != TaskStatus::kDualAnnotated) {
    throw Error(Errc::kInvalidState, "task " + task.id + " is " +
                                         std::string(to_string(task.state.status())));
  }
  if (!(ira >= 0.0 && ira <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "ira " + fmt("%g", ira) + " outside [0, 1]");
  }
  RouteDecision d;
  d.ira = ira;
  std::string note = "ira=" + fmt("%.6f", ira);
  if (policy.phase == Phase::kPilot) {
    d.to = TaskStatus::kArbitration;
    d.audit = true;
    note += " pilot";
  } else if (ira < policy.ira_threshold) {
    d.to = TaskStatus::kArbitration;
    note += " below_threshold";
  } else {
    d.draw = sampler.uniform();
    d.audit = *d.draw < policy.qa_sampling;
    d.to = d.audit ? TaskStatus::kArbitration : TaskStatus::kAccepted;
    note += " draw=" + fmt("%.6f", *d.draw) + (d.audit ? " audit" : "");
  }
  task.ira = ira;
  task.state.advance(d.to, at, note);
  return d;
}

std::set<ErrorCategory> rubric_categories(const Annotations& chosen,
                                          const Annotations& ground_truth,
                                          double tau) {
  std::set<ErrorCategory> out;
  const SpanMatching m = match_spans(chosen, ground_truth, tau);
  if (!m.unmatched_right.empty()) out.insert(ErrorCategory::kMissingLabels);
  if (!m.unmatched_left.empty()) out.insert(ErrorCategory::kWrongLabelsAdded);
  for (const auto& p : m.pairs) {
    const auto& c = chosen[p.left];
    const auto& g = ground_truth[p.right];
    if (c.type != g.type) out.insert(ErrorCategory::kWrongLabelsAdded);
    if (c.span != g.span) out.insert(ErrorCategory::kIncorrectSpan);
  }
  return out;
}

namespace {

// Order-insensitive comparison of two annotation lists.
bool same_annotations(Annotations a, Annotations b) {
  auto less = [](const SpanAnnotation& x, const SpanAnnotation& y) {
    return std::tie(x.span, x.type, x.text) < std::tie(y.span, y.type, y.text);
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

}  // namespace

const GroundTruth& record_review(Corpus& corpus, Review review,
                                 const ReferenceData& ref, std::int64_t at) {
  Task* task = corpus.find_task(review.task_id);
  if (task == nullptr) throw Error(Errc::kUnknownTask, "no task " + review.task_id);
  if (task->state.status() != TaskStatus::kArbitration) {
    throw Error(Errc::kInvalidState,
                "task " + task->id + " is " +
                    std::string(to_string(task->state.status())) +
                    ", not arbitration");
  }
  const Submission* chosen = corpus.find_submission(review.chosen_submission_id);
  if (chosen == nullptr || chosen->task_id != task->id) {
    throw Error(Errc::kUnknownSubmission, "submission " +
                                              review.chosen_submission_id +
                                              " does not belong to task " + task->id);
  }
  for (auto& ann : review.ground_truth) {
    try {
      ann.type = ref.canonical_type(ann.type.name);
    } catch (const Error& e) {
      throw Error(Errc::kInvalidGroundTruth, e.what());
    }
    const Violation v = validate_annotation(task->prompt, ann, task->locale, ref);
    if (v != Violation::kOk) {
      throw Error(Errc::kInvalidGroundTruth,
                  std::string(to_string(v)) + " at [" +
                      std::to_string(ann.span.start) + ", " +
                      std::to_string(ann.span.end) + ")");
    }
  }
  const bool as_is = review.verdict == Verdict::kAcceptedAsIs;
  if (as_is != review.error_categories.empty()) {
    throw Error(Errc::kInvalidArgument,
                "error categories must be empty iff the verdict is accepted_as_is");
  }
  if (as_is && !same_annotations(review.ground_truth, chosen->annotations)) {
    throw Error(Errc::kInvalidArgument,
                "accepted_as_is ground truth differs from the chosen submission");
  }
  review.reviewed_at = at;
  GroundTruth gt{task->id, review.ground_truth, review.id, {}};
  corpus.add_review(std::move(review));
  task->state.advance(TaskStatus::kReviewed, at);
  return corpus.put_ground_truth(std::move(gt));
}

QualityScore quality_score(const std::string& annotator_id, const Corpus& corpus,
                           const QualityPolicy& policy,
                           std::optional<Phase> phase) {
  QualityScore q;
  q.annotator_id = annotator_id;
  double credit = 0.0;
  for (const auto& [id, review] : corpus.reviews()) {
    const Task* task = corpus.find_task(review.task_id);
    if (task == nullptr || (phase && task->phase != *phase)) continue;
    bool participated = false;
    for (const Submission* s : corpus.submissions_for(review.task_id)) {
      if (s->annotator_id == annotator_id) participated = true;
    }
    if (!participated) continue;
    ++q.reviewed_count;
    const Submission* chosen = corpus.find_submission(review.chosen_submission_id);
    if (chosen == nullptr || chosen->annotator_id != annotator_id) continue;
    if (review.verdict == Verdict::kAcceptedAsIs) {
      credit += 1.0;
    } else if (review.verdict == Verdict::kCorrected && policy.lenient) {
      credit += 0.5;
    }
  }
  if (q.reviewed_count > 0) {
    q.score = credit / static_cast<double>(q.reviewed_count);
    q.qualified = *q.score >= policy.threshold - kEpsilon &&
                  q.reviewed_count >= policy.min_reviewed;
  }
  return q;
}

std::vector<QualityScore> quality_scores(const Corpus& corpus,
                                         const QualityPolicy& policy,
                                         std::optional<Phase> phase) {
  std::set<std::string> ids;
  for (const auto& [id, s] : corpus.submissions()) ids.insert(s.annotator_id);
  std::vector<QualityScore> out;
  for (const auto& id : ids) out.push_back(quality_score(id, corpus, policy, phase));
  return out;
}

PhaseReport phase_report(const Corpus& corpus, Phase phase) {
  PhaseReport r;
  r.phase = phase;
  for (const auto& [id, review] : corpus.reviews()) {
    const Task* task = corpus.find_task(review.task_id);
    if (task == nullptr || task->phase != phase) continue;
    for (LocaleReviewStats* s : {&r.by_locale[task->locale], &r.total}) {
      switch (review.verdict) {
        case Verdict::kAcceptedAsIs: ++s->accepted_as_is; break;
        case Verdict::kCorrected: ++s->corrected; break;
        case Verdict::kRejected: ++s->rejected; break;
      }
      for (ErrorCategory c : review.error_categories) {
        ++s->categories[static_cast<std::size_t>(c)];
      }
    }
  }
  return r;
}

}  // namespace piiqa
