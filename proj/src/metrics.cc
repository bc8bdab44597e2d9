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

#include "piiqa/metrics.h"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <tuple>

#include "piiqa/error.h"

namespace piiqa {

std::string_view to_string(Grain g) {
  return g == Grain::kFine ? "fine" : "coarse";
}

Grain parse_grain(std::string_view name) {
  if (name == "fine") return Grain::kFine;
  if (name == "coarse") return Grain::kCoarse;
  throw Error(Errc::kInvalidArgument, "unknown grain '" + std::string(name) + "'");
}

std::string_view to_string(Taxonomy t) {
  switch (t) {
    case Taxonomy::kAgreement: return "agreement";
    case Taxonomy::kDisagreement: return "disagreement";
    case Taxonomy::kNotReviewed: return "not_reviewed";
  }
  return "unknown";
}

std::string_view to_string(FprMode m) {
  return m == FprMode::kRow ? "row" : "type_instance";
}

FprMode parse_fpr_mode(std::string_view name) {
  if (name == "row") return FprMode::kRow;
  if (name == "type_instance") return FprMode::kTypeInstance;
  throw Error(Errc::kInvalidArgument, "unknown fpr mode '" + std::string(name) + "'");
}

std::string_view to_string(Reference r) {
  return r == Reference::kReview ? "review" : "truth";
}

Reference parse_reference(std::string_view name) {
  if (name == "review") return Reference::kReview;
  if (name == "truth") return Reference::kSyntheticTruth;
  throw Error(Errc::kInvalidArgument,
              "unknown reference '" + std::string(name) + "'");
}

std::vector<PiiType> type_sequence(std::span<const SpanAnnotation> annotations) {
  std::vector<const SpanAnnotation*> sorted;
  sorted.reserve(annotations.size());
  for (const auto& a : annotations) sorted.push_back(&a);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SpanAnnotation* x, const SpanAnnotation* y) {
                     return std::tie(x->span.start, x->span.end, x->type) <
                            std::tie(y->span.start, y->span.end, y->type);
                   });
  std::vector<PiiType> out;
  out.reserve(sorted.size());
  for (const auto* a : sorted) out.push_back(a->type);
  return out;
}

bool row_correct_fine(std::span<const PiiType> gt, std::span<const PiiType> sub) {
  return std::equal(gt.begin(), gt.end(), sub.begin(), sub.end());
}

bool row_correct_coarse(std::span<const PiiType> gt,
                        std::span<const PiiType> sub) {
  if (gt.empty() && sub.empty()) return true;
  std::map<PiiType, std::size_t> remaining;
  for (const auto& t : gt) ++remaining[t];
  for (const auto& t : sub) {
    auto it = remaining.find(t);
    if (it != remaining.end() && it->second > 0) return true;
  }
  return false;
}

RowVerdict classify_row(const Annotations* gt, const Annotations& submission,
                        const std::set<PiiType>* type_universe) {
  RowVerdict v;
  v.submission_positive = !submission.empty();
  if (gt == nullptr) return v;
  v.gt_positive = !gt->empty();
  const auto gt_seq = type_sequence(*gt);
  const auto sub_seq = type_sequence(submission);
  v.fine_correct = row_correct_fine(gt_seq, sub_seq);
  v.coarse_correct = row_correct_coarse(gt_seq, sub_seq);
  v.taxonomy = v.fine_correct ? Taxonomy::kAgreement : Taxonomy::kDisagreement;
  if (type_universe != nullptr) {
    const std::set<PiiType> gt_types(gt_seq.begin(), gt_seq.end());
    const std::set<PiiType> sub_types(sub_seq.begin(), sub_seq.end());
    for (const auto& t : *type_universe) {
      if (gt_types.count(t)) continue;
      if (sub_types.count(t)) {
        ++v.type_fp;
      } else {
        ++v.type_tn;
      }
    }
  }
  return v;
}

ConfusionCounts count_rows(std::span<const RowVerdict> rows, Grain grain,
                           FprMode mode) {
  ConfusionCounts c;
  for (const RowVerdict& r : rows) {
    if (r.taxonomy == Taxonomy::kNotReviewed) continue;
    const bool correct = grain == Grain::kFine ? r.fine_correct : r.coarse_correct;
    if (r.gt_positive) {
      if (correct) {
        ++c.tp;
      } else {
        ++c.fn;
      }
    }
    if (mode == FprMode::kRow) {
      if (!r.gt_positive) {
        if (r.submission_positive) {
          ++c.fp;
        } else {
          ++c.tn;
        }
      }
    } else {
      c.fp += r.type_fp;
      c.tn += r.type_tn;
    }
  }
  return c;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::optional<double> recall(std::span<const RowVerdict> rows, Grain grain) {
  const ConfusionCounts c = count_rows(rows, grain);
  return ratio(c.tp, c.tp + c.fn);
}

std::optional<double> fpr(std::span<const RowVerdict> rows, Grain grain,
                          FprMode mode) {
  const ConfusionCounts c = count_rows(rows, grain, mode);
  return ratio(c.fp, c.fp + c.tn);
}

namespace {

Annotations canonicalized(const Annotations& in, const ReferenceData& ref) {
  Annotations out = in;
  for (auto& a : out) a.type = ref.canonical_type(a.type.name);
  return out;
}

}  // namespace

std::vector<RowVerdict> corpus_rows(const Corpus& corpus,
                                    const ReferenceData& ref,
                                    const MetricsOptions& options,
                                    std::vector<const Submission*>* row_keys) {
  std::vector<RowVerdict> rows;
  for (const auto& [task_id, task] : corpus.tasks()) {
    if (options.phase && task.phase != *options.phase) continue;
    if (options.locale && task.locale != *options.locale) continue;
    std::optional<Annotations> reference;
    if (options.reference == Reference::kReview) {
      if (const GroundTruth* gt = corpus.ground_truth_for(task_id)) {
        reference = canonicalized(gt->annotations, ref);
      }
    } else if (task.synthetic_truth) {
      reference = canonicalized(*task.synthetic_truth, ref);
    }
    const std::set<PiiType>* universe =
        options.fpr_mode == FprMode::kTypeInstance ? &ref.registry_for(task.locale)
                                                   : nullptr;
    for (const Submission* sub : corpus.submissions_for(task_id)) {
      rows.push_back(classify_row(reference ? &*reference : nullptr,
                                  canonicalized(sub->annotations, ref), universe));
      if (row_keys != nullptr) row_keys->push_back(sub);
    }
  }
  return rows;
}

std::vector<MetricsReport> metrics_report(const Corpus& corpus,
                                          const ReferenceData& ref,
                                          const MetricsOptions& options) {
  using Key = std::pair<std::string, int>;
  std::map<Key, std::vector<RowVerdict>> groups;
  std::map<Key, MetricsReport> reports;
  std::vector<const Submission*> keys;
  const auto rows = corpus_rows(corpus, ref, options, &keys);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Task& task = *corpus.find_task(keys[i]->task_id);
    Key key{options.group_by.locale ? task.locale : std::string(),
            options.group_by.phase ? static_cast<int>(task.phase) : -1};
    auto& report = reports[key];
    if (options.group_by.locale) report.locale = task.locale;
    if (options.group_by.phase) report.phase = task.phase;
    groups[key].push_back(rows[i]);
  }
  std::vector<MetricsReport> out;
  for (auto& [key, report] : reports) {
    const auto& g = groups[key];
    report.rows = g.size();
    report.not_reviewed = static_cast<std::size_t>(
        std::count_if(g.begin(), g.end(), [](const RowVerdict& r) {
          return r.taxonomy == Taxonomy::kNotReviewed;
        }));
    report.fine = count_rows(g, Grain::kFine, options.fpr_mode);
    report.coarse = count_rows(g, Grain::kCoarse, options.fpr_mode);
    report.recall_fine = ratio(report.fine.tp, report.fine.tp + report.fine.fn);
    report.recall_coarse =
        ratio(report.coarse.tp, report.coarse.tp + report.coarse.fn);
    report.fpr_fine = ratio(report.fine.fp, report.fine.fp + report.fine.tn);
    report.fpr_coarse =
        ratio(report.coarse.fp, report.coarse.fp + report.coarse.tn);
    out.push_back(std::move(report));
  }
  return out;
}

std::string render_phase_trend(std::span<const MetricsReport> reports,
                               TrendMetric metric) {
  std::map<std::string, std::array<std::optional<double>, 3>> table;
  for (const auto& r : reports) {
    if (!r.locale || !r.phase) continue;
    std::optional<double> v;
    switch (metric) {
      case TrendMetric::kRecallFine: v = r.recall_fine; break;
      case TrendMetric::kFprFine: v = r.fpr_fine; break;
      case TrendMetric::kRecallCoarse: v = r.recall_coarse; break;
      case TrendMetric::kFprCoarse: v = r.fpr_coarse; break;
    }
    table[*r.locale][static_cast<std::size_t>(*r.phase)] = v;
  }
  std::string out = "locale\tpilot\ttraining\tproduction\n";
  for (const auto& [locale, values] : table) {
    out += locale;
    for (const auto& v : values) {
      out += '\t';
      if (v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", *v);
        out += buf;
      } else {
        out += '-';
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace piiqa
