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

#include "piiqa/agreement.h"

#include <algorithm>
#include <tuple>

#include "piiqa/error.h"
#include "piiqa/text.h"

namespace piiqa {

std::size_t overlap_1d(const Span& a, const Span& b) {
  const std::size_t lo = std::max(a.start, b.start);
  const std::size_t hi = std::min(a.end, b.end);
  return hi > lo ? hi - lo : 0;
}

namespace {

struct Ratio {
  std::size_t num;
  std::size_t den;
};

Ratio iou_ratio(const Span& a, const Span& b) {
  const std::size_t inter = overlap_1d(a, b);
  return {inter, a.length() + b.length() - inter};
}

struct Candidate {
  std::size_t left;
  std::size_t right;
  Ratio ratio;
};

auto content_key(const SpanAnnotation& a) {
  return std::tie(a.span.start, a.span.end, a.type, a.text);
}

}  // namespace

double iou(const Span& a, const Span& b) {
  const Ratio r = iou_ratio(a, b);
  if (r.num == 0 || r.den == 0) return 0.0;
  return static_cast<double>(r.num) / static_cast<double>(r.den);
}

SpanMatching match_spans(std::span<const SpanAnnotation> left,
                         std::span<const SpanAnnotation> right, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "iou threshold must be in (0, 1]");
  }
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      const Ratio r = iou_ratio(left[i].span, right[j].span);
      if (r.num == 0) continue;
      if (static_cast<double>(r.num) / static_cast<double>(r.den) < tau) continue;
      candidates.push_back({i, j, r});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](const Candidate& x, const Candidate& y) {
              // Exact rational comparison of x.iou and y.iou.
              const auto lhs = x.ratio.num * y.ratio.den;
              const auto rhs = y.ratio.num * x.ratio.den;
              if (lhs != rhs) return lhs > rhs;
              const auto& xl = left[x.left];
              const auto& yl = left[y.left];
              const auto& xr = right[x.right];
              const auto& yr = right[y.right];
              if (xl.span.start != yl.span.start) return xl.span.start < yl.span.start;
              if (xr.span.start != yr.span.start) return xr.span.start < yr.span.start;
              if (content_key(xl) != content_key(yl)) {
                return content_key(xl) < content_key(yl);
              }
              if (content_key(xr) != content_key(yr)) {
                return content_key(xr) < content_key(yr);
              }
              return std::tie(x.left, x.right) < std::tie(y.left, y.right);
            });

  SpanMatching out;
  std::vector<bool> used_left(left.size(), false);
  std::vector<bool> used_right(right.size(), false);
  for (const Candidate& c : candidates) {
    if (used_left[c.left] || used_right[c.right]) continue;
    used_left[c.left] = true;
    used_right[c.right] = true;
    out.pairs.push_back({c.left, c.right,
                         static_cast<double>(c.ratio.num) /
                             static_cast<double>(c.ratio.den)});
  }
  for (std::size_t i = 0; i < left.size(); ++i) {
    if (!used_left[i]) out.unmatched_left.push_back(i);
  }
  for (std::size_t j = 0; j < right.size(); ++j) {
    if (!used_right[j]) out.unmatched_right.push_back(j);
  }
  return out;
}

AgreementBreakdown pair_agreement(const Submission& a, const Submission& b,
                                  double tau) {
  if (a.task_id != b.task_id) {
    throw Error(Errc::kTaskMismatch, "submissions " + a.id + " and " + b.id +
                                         " belong to different tasks");
  }
  AgreementBreakdown out;
  const auto& left = a.annotations;
  const auto& right = b.annotations;
  if (left.empty() && right.empty()) {
    out.span_score = out.type_score = out.text_score = out.overall = 1.0;
    return out;
  }
  if (left.empty() || right.empty()) return out;

  const SpanMatching m = match_spans(left, right, tau);
  std::vector<double> ious;
  std::size_t type_hits = 0;
  std::size_t text_hits = 0;
  for (const MatchedPair& p : m.pairs) {
    ious.push_back(p.iou);
    if (left[p.left].type == right[p.right].type) ++type_hits;
    if (text::collapse_space(left[p.left].text) ==
        text::collapse_space(right[p.right].text)) {
      ++text_hits;
    }
  }
  // Summed in sorted order so pair_agreement(a, b) == pair_agreement(b, a)
  // bit for bit.
  std::sort(ious.begin(), ious.end());
  double span_sum = 0.0;
  for (double v : ious) span_sum += v;
  const double denom = static_cast<double>(std::max(left.size(), right.size()));
  out.span_score = span_sum / denom;
  out.type_score = static_cast<double>(type_hits) / denom;
  out.text_score = static_cast<double>(text_hits) / denom;
  out.overall = (out.span_score + out.type_score + out.text_score) / 3.0;
  return out;
}

double task_agreement(std::span<const Submission* const> submissions,
                      double tau) {
  if (submissions.size() < 2) {
    throw Error(Errc::kInsufficientSubmissions,
                "task agreement needs at least two submissions, got " +
                    std::to_string(submissions.size()));
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < submissions.size(); ++i) {
    for (std::size_t j = i + 1; j < submissions.size(); ++j) {
      sum += pair_agreement(*submissions[i], *submissions[j], tau).overall;
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

double task_agreement(std::span<const Submission> submissions, double tau) {
  std::vector<const Submission*> ptrs;
  ptrs.reserve(submissions.size());
  for (const auto& s : submissions) ptrs.push_back(&s);
  return task_agreement(std::span<const Submission* const>(ptrs), tau);
}

AgreementMatrix::Key AgreementMatrix::key(const std::string& a,
                                          const std::string& b) {
  return a < b ? Key{a, b} : Key{b, a};
}

void AgreementMatrix::note(const std::string& id) {
  auto it = std::lower_bound(annotators_.begin(), annotators_.end(), id);
  if (it == annotators_.end() || *it != id) annotators_.insert(it, id);
}

void AgreementMatrix::add(const std::string& a, const std::string& b,
                          double overall) {
  note(a);
  note(b);
  const Key k = key(a, b);
  sum_[k] += overall;
  ++support_[k];
}

void AgreementMatrix::add_self(const std::string& a) { add(a, a, 1.0); }

std::optional<double> AgreementMatrix::cell(const std::string& a,
                                            const std::string& b) const {
  const Key k = key(a, b);
  auto it = support_.find(k);
  if (it == support_.end() || it->second == 0) return std::nullopt;
  return sum_.at(k) / static_cast<double>(it->second);
}

std::size_t AgreementMatrix::support(const std::string& a,
                                     const std::string& b) const {
  auto it = support_.find(key(a, b));
  return it == support_.end() ? 0 : it->second;
}

AgreementMatrix annotator_matrix(const Corpus& corpus, double tau) {
  AgreementMatrix m;
  for (const auto& [task_id, task] : corpus.tasks()) {
    const auto subs = corpus.submissions_for(task_id);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      m.add_self(subs[i]->annotator_id);
      for (std::size_t j = i + 1; j < subs.size(); ++j) {
        if (subs[i]->annotator_id == subs[j]->annotator_id) continue;
        m.add(subs[i]->annotator_id, subs[j]->annotator_id,
              pair_agreement(*subs[i], *subs[j], tau).overall);
      }
    }
  }
  return m;
}

}  // namespace piiqa
