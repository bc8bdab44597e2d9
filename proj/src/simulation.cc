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

#include "piiqa/simulation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "piiqa/agreement.h"
#include "piiqa/error.h"
#include "piiqa/text.h"

namespace piiqa {

namespace {

constexpr double kSumTolerance = 1e-9;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::size_t weighted_pick(const std::vector<double>& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  // Rounding left u at the very top; take the last non-zero weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return 0;
}

struct Token {
  std::size_t start = 0;
  std::size_t end = 0;
};

std::vector<Token> tokens_of(const std::u32string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && text::is_space(s[i])) ++i;
    if (i >= s.size()) break;
    Token t{i, i};
    while (i < s.size() && !text::is_space(s[i])) ++i;
    t.end = i;
    out.push_back(t);
  }
  return out;
}

}  // namespace

void AnnotatorProfile::validate() const {
  if (!is_probability(miss_rate) || !is_probability(jitter_rate) ||
      !is_probability(spurious_rate)) {
    throw Error(Errc::kSpecInvalid, "profile rates must lie in [0, 1]");
  }
  for (const auto& [from, row] : confusion) {
    double sum = 0.0;
    for (const auto& [to, p] : row) {
      if (!is_probability(p)) {
        throw Error(Errc::kSpecInvalid, "confusion weight outside [0, 1] for " + from.name);
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw Error(Errc::kSpecInvalid, "confusion row for " + from.name + " does not sum to 1");
    }
  }
}

Annotations simulate_annotator(std::string_view prompt, const Annotations& truth,
                               std::string_view locale,
                               const AnnotatorProfile& profile,
                               const ReferenceData& ref, Rng& rng) {
  const std::u32string scalars = text::decode(prompt);
  const std::size_t len = scalars.size();
  Annotations out;
  for (const auto& ann : truth) {
    if (profile.miss_rate > 0.0 && rng.bernoulli(profile.miss_rate)) continue;
    SpanAnnotation a = ann;
    auto row = profile.confusion.find(ann.type);
    if (row != profile.confusion.end() && !row->second.empty()) {
      std::vector<double> w;
      for (const auto& [t, p] : row->second) w.push_back(p);
      a.type = row->second[weighted_pick(w, rng)].first;
    }
    if (profile.span_jitter > 0 && rng.bernoulli(profile.jitter_rate)) {
      const auto j = static_cast<std::int64_t>(profile.span_jitter);
      const std::int64_t s = static_cast<std::int64_t>(a.span.start) + rng.between(-j, j);
      const std::int64_t e = static_cast<std::int64_t>(a.span.end) + rng.between(-j, j);
      const auto cs = static_cast<std::size_t>(std::clamp<std::int64_t>(s, 0, len));
      const auto ce = static_cast<std::size_t>(std::clamp<std::int64_t>(e, 0, len));
      if (cs < ce) a.span = {cs, ce};
    }
    a.text = text::encode(std::u32string_view(scalars).substr(
        a.span.start, a.span.end - a.span.start));
    out.push_back(std::move(a));
  }
  if (profile.spurious_rate > 0.0 && rng.bernoulli(profile.spurious_rate)) {
    std::vector<Token> free;
    for (const Token& t : tokens_of(scalars)) {
      const Span s{t.start, t.end};
      bool clear = true;
      for (const auto& a : truth) clear = clear && overlap_1d(s, a.span) == 0;
      for (const auto& a : out) clear = clear && overlap_1d(s, a.span) == 0;
      if (clear) free.push_back(t);
    }
    if (!free.empty()) {
      const Token t = free[rng.below(free.size())];
      const auto& registry = ref.registry_for(ref.locale(locale).code);
      auto it = registry.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(rng.below(registry.size())));
      out.push_back({{t.start, t.end},
                     *it,
                     text::encode(std::u32string_view(scalars).substr(
                         t.start, t.end - t.start))});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SpanAnnotation& x, const SpanAnnotation& y) {
                     return x.span < y.span;
                   });
  return out;
}

AnnotatorProfile build_profile(const ErrorRates& rates, Phase phase,
                               std::string_view locale, const ReferenceData& ref) {
  AnnotatorProfile p;
  p.miss_rate = rates.miss;
  p.spurious_rate = rates.spurious;
  p.span_jitter = rates.span_jitter;
  p.jitter_rate = rates.jitter_rate;
  if (rates.confusion > 0.0) {
    const auto& registry = ref.registry_for(ref.locale(locale).code);
    const std::vector<PiiType> types(registry.begin(), registry.end());
    for (std::size_t i = 0; i < types.size(); ++i) {
      const PiiType& t = types[i];
      std::set<PiiType> partners;
      for (const auto& [a, b] : ref.confusions(to_string(phase))) {
        if (a == t && registry.count(b)) partners.insert(b);
        if (b == t && registry.count(a)) partners.insert(a);
      }
      if (partners.empty()) {
        for (const auto& other : types) {
          if (other != t && ref.category_of(other) == ref.category_of(t)) {
            partners.insert(other);
          }
        }
      }
      if (partners.empty()) partners.insert(types[(i + 1) % types.size()]);
      auto& row = p.confusion[t];
      row.emplace_back(t, 1.0 - rates.confusion);
      for (const auto& other : partners) {
        row.emplace_back(other, rates.confusion / static_cast<double>(partners.size()));
      }
    }
  }
  p.validate();
  return p;
}

std::optional<std::array<VolumeRange, 3>> published_volumes(std::string_view locale) {
  struct Row {
    std::string_view locale;
    std::array<VolumeRange, 3> ranges;
  };
  static constexpr Row kRows[] = {
      {"ar-UAE", {{{75, 80}, {1000, 1200}, {4000, 4200}}}},
      {"fi-FI", {{{95, 100}, {1000, 1200}, {4000, 4200}}}},
      {"hi-IN", {{{70, 75}, {1000, 1200}, {4000, 4200}}}},
      {"no-NO", {{{150, 170}, {1000, 1200}, {4000, 4200}}}},
      {"nl-BE", {{{25, 30}, {300, 350}, {1000, 1200}}}},
      {"nl-NL", {{{70, 75}, {700, 800}, {2500, 2600}}}},
      {"pl-PL", {{{80, 85}, {1000, 1200}, {4000, 4200}}}},
      {"pt-BR", {{{50, 55}, {700, 800}, {2500, 2600}}}},
      {"pt-PT", {{{25, 30}, {300, 400}, {1000, 1200}}}},
      {"sv-SE", {{{80, 85}, {1000, 1200}, {4000, 4200}}}},
      {"zh-CN", {{{75, 80}, {700, 800}, {2500, 2600}}}},
      {"zh-SG", {{{25, 30}, {300, 350}, {1000, 1200}}}},
  };
  for (const auto& row : kRows) {
    if (row.locale == locale) return row.ranges;
  }
  return std::nullopt;
}

void CorpusSpec::validate(const ReferenceData& ref) const {
  auto fail = [](const std::string& why) { throw Error(Errc::kSpecInvalid, why); };
  if (!(negative_fraction > 0.0 && negative_fraction < 1.0)) {
    fail("negative_fraction must lie in (0, 1)");
  }
  if (annotators_per_task < 2) fail("annotators_per_task must be at least 2");
  if (annotators_per_locale < annotators_per_task) {
    fail("annotators_per_locale below annotators_per_task");
  }
  auto check_mix = [&fail](const auto& weights, const std::string& what) {
    double sum = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) fail(what + " has a negative weight");
      sum += w;
    }
    if (!(sum > 0.0)) fail(what + " is empty");
  };
  check_mix(bin_mix, "bin_mix");
  check_mix(pii_density, "pii_density");
  std::vector<double> domains;
  for (const auto& [d, w] : domain_mix) domains.push_back(w);
  if (!domains.empty()) check_mix(domains, "domain_mix");
  double listed = 0.0;
  for (const auto& [t, w] : type_mix) {
    if (!is_probability(w)) fail("type_mix weight for " + t.name + " outside [0, 1]");
    listed += w;
  }
  if (listed > 1.0 + kSumTolerance) fail("type_mix weights exceed 1");
  for (const auto& r : profiles) {
    if (!is_probability(r.miss) || !is_probability(r.confusion) ||
        !is_probability(r.spurious) || !is_probability(r.jitter_rate)) {
      fail("profile rates must lie in [0, 1]");
    }
  }
  std::set<std::string> seen;
  for (const auto& lv : locales) {
    if (!ref.has_locale(lv.locale)) fail("unknown locale " + lv.locale);
    if (!seen.insert(ref.locale(lv.locale).code).second) fail("duplicate locale " + lv.locale);
    auto r = ranges.find(lv.locale);
    if (r == ranges.end()) continue;
    for (std::size_t p = 0; p < 3; ++p) {
      if (lv.tasks[p] < r->second[p].lo || lv.tasks[p] > r->second[p].hi) {
        fail(lv.locale + " " + std::string(to_string(kPhases[p])) + " count " +
             std::to_string(lv.tasks[p]) + " outside [" + std::to_string(r->second[p].lo) +
             ", " + std::to_string(r->second[p].hi) + "]");
      }
    }
  }
  bins.validate();
}

namespace {

std::vector<PiiType> draw_types(std::size_t n, const std::vector<PiiType>& pool,
                                const std::vector<double>& weights, Rng& rng) {
  std::vector<PiiType> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pool[weighted_pick(weights, rng)]);
  return out;
}

std::vector<double> type_weights(const CorpusSpec& spec,
                                 const std::vector<PiiType>& pool) {
  double listed = 0.0;
  std::size_t rest = 0;
  for (const auto& t : pool) {
    auto it = spec.type_mix.find(t);
    if (it != spec.type_mix.end()) {
      listed += it->second;
    } else {
      ++rest;
    }
  }
  const double share = rest ? std::max(0.0, 1.0 - listed) / static_cast<double>(rest) : 0.0;
  std::vector<double> w;
  for (const auto& t : pool) {
    auto it = spec.type_mix.find(t);
    w.push_back(it != spec.type_mix.end() ? it->second : share);
  }
  return w;
}

std::string task_id_for(const std::string& locale, Phase phase, std::size_t n) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s-%s-%06zu", locale.c_str(),
                std::string(to_string(phase)).c_str(), n);
  return buf;
}

}  // namespace

Corpus gen_corpus(const CorpusSpec& spec, const Generator& gen) {
  const ReferenceData& ref = gen.reference();
  spec.validate(ref);
  Corpus corpus;
  std::vector<std::string> domains;
  std::vector<double> domain_w;
  if (spec.domain_mix.empty()) {
    for (auto d : kDomains) {
      domains.emplace_back(d);
      domain_w.push_back(1.0);
    }
  } else {
    for (const auto& [d, w] : spec.domain_mix) {
      domains.push_back(d);
      domain_w.push_back(w);
    }
  }
  const std::vector<double> bin_w(spec.bin_mix.begin(), spec.bin_mix.end());
  std::int64_t clock = 0;

  for (const auto& lv : spec.locales) {
    const std::string code = ref.locale(lv.locale).code;
    const auto& registry = ref.registry_for(code);
    const std::vector<PiiType> pool(registry.begin(), registry.end());
    const std::vector<double> weights = type_weights(spec, pool);

    AnnotatorPool annotators;
    for (std::size_t a = 0; a < spec.annotators_per_locale; ++a) {
      char id[64];
      std::snprintf(id, sizeof(id), "%s-a%02zu", code.c_str(), a + 1);
      annotators.annotators.push_back({id, {code}, true});
    }

    for (std::size_t p = 0; p < kPhases.size(); ++p) {
      const Phase phase = kPhases[p];
      const AnnotatorProfile profile = build_profile(spec.profiles[p], phase, code, ref);
      for (std::size_t n = 0; n < lv.tasks[p]; ++n) {
        const std::string id = task_id_for(code, phase, n + 1);
        Rng rng(derive_seed(spec.seed, "task:" + id));
        Task task;
        task.id = id;
        task.locale = code;
        task.phase = phase;
        task.domain = domains[weighted_pick(domain_w, rng)];
        auto bin = static_cast<LengthBin>(weighted_pick(bin_w, rng));
        std::size_t n_pii = 0;
        if (!rng.bernoulli(spec.negative_fraction)) {
          n_pii = weighted_pick(spec.pii_density, rng) + 1;
        }
        const auto types = draw_types(n_pii, pool, weights, rng);
        GeneratedPrompt gp;
        for (;;) {
          try {
            gp = gen.gen_prompt(code, bin, types, rng, spec.bins);
            break;
          } catch (const Error& e) {
            if (e.code() != Errc::kBinInfeasible || bin == LengthBin::kXL) throw;
            bin = static_cast<LengthBin>(static_cast<int>(bin) + 1);
          }
        }
        task.prompt = std::move(gp.prompt);
        task.synthetic_truth = std::move(gp.truth);
        const auto assigned =
            assign(task, annotators, ++clock, spec.annotators_per_task);
        Task& stored = corpus.add_task(std::move(task));
        for (std::size_t k = 0; k < assigned.size(); ++k) {
          Rng sub_rng(derive_seed(spec.seed, "sub:" + id, k));
          Submission s;
          s.id = id + "-s" + std::to_string(k + 1);
          s.task_id = id;
          s.annotator_id = assigned[k];
          s.annotations = simulate_annotator(stored.prompt, *stored.synthetic_truth, code,
                                             profile, ref, sub_rng);
          corpus.add_submission(std::move(s));
        }
        stored.state.advance(TaskStatus::kDualAnnotated, ++clock);
      }
    }
  }
  return corpus;
}

PipelineSummary run_pipeline(Corpus& corpus, const WorkflowConfig& config,
                             const ReferenceData& ref, std::uint64_t seed,
                             std::int64_t& clock, double tau) {
  PipelineSummary summary;
  std::vector<std::string> ids;
  for (const auto& [id, task] : corpus.tasks()) {
    if (task.state.status() == TaskStatus::kDualAnnotated) ids.push_back(id);
  }
  for (const auto& id : ids) {
    Task& task = *corpus.find_task(id);
    const auto subs = corpus.submissions_for(id);
    const double ira = task_agreement(std::span<const Submission* const>(subs), tau);
    const PhasePolicy& policy = config.policy(task.locale, task.phase);
    Rng sampler(derive_seed(seed, "route:" + id));
    const RouteDecision d = route(task, ira, policy, sampler, ++clock);
    ++summary.routed;
    if (d.to == TaskStatus::kAccepted) {
      ++summary.accepted;
      continue;
    }
    if (ira < policy.ira_threshold && policy.phase != Phase::kPilot) {
      ++summary.below_threshold;
    } else {
      ++summary.audited;
    }
    if (!task.synthetic_truth) continue;

    Submission truth_as_sub;
    truth_as_sub.task_id = id;
    truth_as_sub.annotations = *task.synthetic_truth;
    const Submission* chosen = nullptr;
    double best = -1.0;
    for (const Submission* s : subs) {
      const double score = pair_agreement(*s, truth_as_sub, tau).overall;
      if (score > best) {
        best = score;
        chosen = s;
      }
    }
    Review review;
    review.id = "r-" + id;
    review.task_id = id;
    review.reviewer_id = "qa-" + ref.locale(task.locale).group;
    review.chosen_submission_id = chosen->id;
    review.ground_truth = *task.synthetic_truth;
    review.error_categories = rubric_categories(chosen->annotations, review.ground_truth, tau);
    if (review.error_categories.empty()) {
      review.verdict = Verdict::kAcceptedAsIs;
    } else {
      review.verdict = best > 0.0 ? Verdict::kCorrected : Verdict::kRejected;
    }
    review.request_id = review.id;
    record_review(corpus, std::move(review), ref, ++clock);
    ++summary.reviewed;
  }
  return summary;
}

std::optional<double> measured_miss_rate(const Corpus& corpus,
                                         std::optional<Phase> phase, double tau) {
  std::size_t total = 0, missed = 0;
  for (const auto& [id, task] : corpus.tasks()) {
    if (!task.synthetic_truth || (phase && task.phase != *phase)) continue;
    for (const Submission* s : corpus.submissions_for(id)) {
      const SpanMatching m = match_spans(*task.synthetic_truth, s->annotations, tau);
      total += task.synthetic_truth->size();
      missed += m.unmatched_left.size();
    }
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(missed) / static_cast<double>(total);
}

}  // namespace piiqa
