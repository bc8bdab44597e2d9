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

#include "piiqa/rca.h"

#include <algorithm>
#include <tuple>

#include "piiqa/agreement.h"
#include "piiqa/error.h"
#include "piiqa/metrics.h"
#include "piiqa/text.h"

namespace piiqa {

std::string_view to_string(RcaCategory c) {
  switch (c) {
    case RcaCategory::kPiiType: return "PII_TYPE";
    case RcaCategory::kPiiSpan: return "PII_SPAN";
    case RcaCategory::kPiiText: return "PII_TEXT";
    case RcaCategory::kNumberOfPiis: return "NUMBER_OF_PIIS";
    case RcaCategory::kSamePiiOrder: return "SAME_PII_ORDER";
  }
  return "UNKNOWN";
}

std::set<RcaCategory> categorize(const Annotations& gt, const Annotations& sub,
                                 double tau) {
  std::set<RcaCategory> out;
  const SpanMatching m = match_spans(gt, sub, tau);
  for (const auto& p : m.pairs) {
    const auto& g = gt[p.left];
    const auto& s = sub[p.right];
    if (g.type != s.type) out.insert(RcaCategory::kPiiType);
    if (g.span != s.span) out.insert(RcaCategory::kPiiSpan);
    const std::string gt_text = text::collapse_space(g.text);
    const std::string sub_text = text::collapse_space(s.text);
    if (gt_text != sub_text && gt_text.find(sub_text) == std::string::npos &&
        sub_text.find(gt_text) == std::string::npos) {
      out.insert(RcaCategory::kPiiText);
    }
  }
  for (std::size_t l : m.unmatched_left) {
    for (std::size_t r : m.unmatched_right) {
      if (overlap_1d(gt[l].span, sub[r].span) > 0) out.insert(RcaCategory::kPiiSpan);
    }
  }

  const auto gt_seq = type_sequence(gt);
  const auto sub_seq = type_sequence(sub);
  if (gt.size() != sub.size()) {
    out.insert(RcaCategory::kNumberOfPiis);
  } else {
    auto gt_bag = gt_seq, sub_bag = sub_seq;
    std::sort(gt_bag.begin(), gt_bag.end());
    std::sort(sub_bag.begin(), sub_bag.end());
    if (gt_bag != sub_bag) {
      out.insert(RcaCategory::kPiiType);
    } else if (gt_seq != sub_seq) {
      out.insert(RcaCategory::kSamePiiOrder);
    } else if (!m.unmatched_left.empty()) {
      // Same types in the same order, but a span landed elsewhere.
      out.insert(RcaCategory::kPiiSpan);
    }
  }
  return out;
}

std::set<RcaCategory> categorize_disagreement(const GroundTruth& gt,
                                              const Submission& sub, double tau) {
  if (gt.task_id != sub.task_id) {
    throw Error(Errc::kPromptMismatch, "ground truth of " + gt.task_id +
                                           " against submission for " + sub.task_id);
  }
  return categorize(gt.annotations, sub.annotations, tau);
}

namespace {

using PairKey = std::pair<PiiType, PiiType>;

void collect_confusions(const Annotations& gt, const Annotations& sub, double tau,
                        std::map<PairKey, std::size_t>& counts) {
  const SpanMatching m = match_spans(sub, gt, tau);
  for (const auto& p : m.pairs) {
    const PiiType& a = sub[p.left].type;
    const PiiType& b = gt[p.right].type;
    if (a == b) continue;
    ++counts[a < b ? PairKey{a, b} : PairKey{b, a}];
  }
}

std::vector<ConfusionPair> rank(const std::map<PairKey, std::size_t>& counts,
                                Phase phase, std::size_t top_k) {
  std::vector<ConfusionPair> out;
  for (const auto& [key, n] : counts) out.push_back({key.first, key.second, n, phase});
  std::stable_sort(out.begin(), out.end(),
                   [](const ConfusionPair& x, const ConfusionPair& y) {
                     return x.count > y.count;
                   });
  if (out.size() > top_k) out.resize(top_k);
  return out;
}

}  // namespace

std::map<Phase, std::vector<ConfusionPair>> confusion_pairs(const Corpus& corpus,
                                                            std::size_t top_k,
                                                            double tau) {
  std::map<Phase, std::map<PairKey, std::size_t>> counts;
  for (const auto& [task_id, gt] : corpus.ground_truths()) {
    const Task* task = corpus.find_task(task_id);
    if (task == nullptr) continue;
    auto& bucket = counts[task->phase];
    for (const Submission* s : corpus.submissions_for(task_id)) {
      collect_confusions(gt.annotations, s->annotations, tau, bucket);
    }
  }
  std::map<Phase, std::vector<ConfusionPair>> out;
  for (const auto& [phase, c] : counts) {
    auto ranked = rank(c, phase, top_k);
    if (!ranked.empty()) out[phase] = std::move(ranked);
  }
  return out;
}

std::string_view to_string(LengthBin b) {
  switch (b) {
    case LengthBin::kS: return "S";
    case LengthBin::kM: return "M";
    case LengthBin::kL: return "L";
    case LengthBin::kXL: return "XL";
  }
  return "?";
}

const LengthBins& LengthBinConfig::for_locale(std::string_view locale) const {
  auto it = by_locale.find(std::string(locale));
  return it == by_locale.end() ? defaults : it->second;
}

void LengthBinConfig::validate() const {
  auto check = [](const LengthBins& b, const std::string& who) {
    if (!(b.m_min > 0 && b.m_min < b.l_min && b.l_min < b.xl_min &&
          b.xl_min <= b.xl_max)) {
      throw Error(Errc::kSpecInvalid,
                  "length bin boundaries for " + who + " are not increasing");
    }
  };
  check(defaults, "defaults");
  for (const auto& [locale, b] : by_locale) check(b, locale);
}

BinResult length_bin(std::string_view prompt, const LengthBinConfig& cfg,
                     std::string_view locale) {
  const LengthBins& b = cfg.for_locale(locale);
  BinResult r;
  r.count = b.count_chars ? text::count_non_space(prompt) : text::count_words(prompt);
  if (r.count < b.m_min) {
    r.bin = LengthBin::kS;
  } else if (r.count < b.l_min) {
    r.bin = LengthBin::kM;
  } else if (r.count < b.xl_min) {
    r.bin = LengthBin::kL;
  } else {
    r.bin = LengthBin::kXL;
    r.clamped = r.count > b.xl_max;
  }
  return r;
}

std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::kDomain: return "domain";
    case Axis::kLengthBin: return "length_bin";
    case Axis::kPiiCategory: return "pii_category";
  }
  return "?";
}

Axis parse_axis(std::string_view name) {
  if (name == "domain") return Axis::kDomain;
  if (name == "length_bin") return Axis::kLengthBin;
  if (name == "pii_category") return Axis::kPiiCategory;
  throw Error(Errc::kUnknownAxis, "unknown axis '" + std::string(name) + "'");
}

Grouping parse_grouping(std::string_view name) {
  if (name == "group" || name == "locale_group") return Grouping::kLocaleGroup;
  if (name == "locale") return Grouping::kLocale;
  if (name == "all") return Grouping::kAll;
  throw Error(Errc::kInvalidArgument, "unknown grouping '" + std::string(name) + "'");
}

std::vector<DistributionReport> distributions(const Corpus& corpus, Axis axis,
                                              const ReferenceData& ref,
                                              const DistributionOptions& options,
                                              std::vector<std::string>* warnings) {
  std::map<std::string, DistributionReport> groups;
  auto group_of = [&](const std::string& locale) -> std::string {
    switch (options.grouping) {
      case Grouping::kAll: return "all";
      case Grouping::kLocale: return locale;
      case Grouping::kLocaleGroup: break;
    }
    auto it = options.merges.find(locale);
    if (it != options.merges.end()) return it->second;
    return ref.has_locale(locale) ? ref.locale(locale).group : locale;
  };
  for (const auto& [task_id, task] : corpus.tasks()) {
    DistributionReport& rep = groups[group_of(task.locale)];
    switch (axis) {
      case Axis::kDomain:
        ++rep.counts[task.domain];
        break;
      case Axis::kLengthBin: {
        const BinResult b = length_bin(task.prompt, options.bins, task.locale);
        if (b.clamped && warnings != nullptr) {
          warnings->push_back(task_id + ": " + std::to_string(b.count) +
                              " exceeds the XL upper bound, counted as XL");
        }
        ++rep.counts[std::string(to_string(b.bin))];
        break;
      }
      case Axis::kPiiCategory: {
        const Annotations* truth = nullptr;
        if (const GroundTruth* gt = corpus.ground_truth_for(task_id)) {
          truth = &gt->annotations;
        } else if (task.synthetic_truth) {
          truth = &*task.synthetic_truth;
        }
        if (truth == nullptr) break;
        for (const auto& a : *truth) {
          ++rep.counts[ref.category_of(ref.canonical_type(a.type.name)).name];
        }
        break;
      }
    }
  }
  std::vector<DistributionReport> out;
  for (auto& [group, rep] : groups) {
    rep.axis = axis;
    rep.group = group;
    for (const auto& [bucket, n] : rep.counts) rep.total += n;
    if (rep.total == 0) continue;
    for (const auto& [bucket, n] : rep.counts) {
      rep.proportions[bucket] = static_cast<double>(n) / static_cast<double>(rep.total);
    }
    out.push_back(std::move(rep));
  }
  return out;
}

namespace {

struct WindowCounts {
  std::size_t reviewed_tasks = 0;
  std::size_t rows = 0;
  std::size_t disagreement_rows = 0;
  std::map<RcaCategory, std::size_t> counts;
  std::map<Phase, std::map<PairKey, std::size_t>> confusions;
  std::map<std::string, std::size_t> locales;
};

WindowCounts count_window(const Corpus& corpus, ReviewWindow w, double tau) {
  WindowCounts c;
  for (RcaCategory cat : kRcaCategories) c.counts[cat] = 0;
  for (const auto& [id, review] : corpus.reviews()) {
    if (review.reviewed_at < w.from || review.reviewed_at >= w.to) continue;
    const GroundTruth* gt = corpus.ground_truth_for(review.task_id);
    const Task* task = corpus.find_task(review.task_id);
    if (gt == nullptr || task == nullptr) continue;
    ++c.reviewed_tasks;
    for (const Submission* s : corpus.submissions_for(review.task_id)) {
      ++c.rows;
      const auto cats = categorize_disagreement(*gt, *s, tau);
      if (!cats.empty()) {
        ++c.disagreement_rows;
        ++c.locales[task->locale];
      }
      for (RcaCategory cat : cats) ++c.counts[cat];
      collect_confusions(gt->annotations, s->annotations, tau,
                         c.confusions[task->phase]);
    }
  }
  return c;
}

}  // namespace

RcaReport rca_report(const Corpus& corpus, ReviewWindow window, double tau,
                     std::size_t top_k) {
  if (window.to < window.from) {
    throw Error(Errc::kInvalidArgument, "review window ends before it starts");
  }
  RcaReport r;
  r.window = window;
  const WindowCounts cur = count_window(corpus, window, tau);
  const std::int64_t len = window.to - window.from;
  const WindowCounts prev =
      count_window(corpus, {window.from - len, window.from}, tau);
  r.reviewed_tasks = cur.reviewed_tasks;
  r.rows = cur.rows;
  r.disagreement_rows = cur.disagreement_rows;
  r.counts = cur.counts;
  r.affected_locales = cur.locales;
  for (const auto& [phase, counts] : cur.confusions) {
    for (auto& p : rank(counts, phase, top_k)) r.confusions.push_back(std::move(p));
  }
  for (RcaCategory cat : kRcaCategories) {
    const auto d = static_cast<std::int64_t>(cur.counts.at(cat)) -
                   static_cast<std::int64_t>(prev.counts.at(cat));
    r.trend[cat] = d;
    r.trend_total += d;
  }
  if (cur.reviewed_tasks == 0) r.warning = "EmptyWindow: no reviews in window";
  return r;
}

}  // namespace piiqa
