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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Usage: acceptance [path/to/piiqa]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.h"
#include "piiqa/agreement.h"
#include "piiqa/config.h"
#include "piiqa/exchange.h"
#include "piiqa/metrics.h"
#include "piiqa/random.h"
#include "piiqa/rca.h"
#include "piiqa/simulation.h"
#include "piiqa/store.h"
#include "piiqa/synth.h"
#include "piiqa/text.h"
#include "piiqa/workflow.h"

namespace piiqa {
namespace {

namespace fs = std::filesystem;

const ReferenceData& ref() { return ReferenceData::builtin(); }

const Generator& generator() {
  static const Generator g(ref());
  return g;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c, d);
  return buf;
}

std::string opt(const std::optional<double>& v) {
  return v ? fmt("%.4f", *v) : std::string("NA");
}

// --- 1 ---------------------------------------------------------------------

Outcome iou_oracle() {
  Rng rng(derive_seed(1, "acceptance:iou"));
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t len = 1 + rng.below(500);
    auto span = [&] {
      const std::size_t s = rng.below(len);
      return Span{s, s + 1 + rng.below(len - s)};
    };
    const Span a = span(), b = span();
    if (overlap_1d(a, b) != oracle::overlap(a, b)) ++mismatches;
    if (iou(a, b) != oracle::iou(a, b)) ++mismatches;
  }
  return {mismatches == 0, "1000 pairs, " + std::to_string(mismatches) + " mismatches"};
}

// --- 2 ---------------------------------------------------------------------

Outcome metrics_oracle() {
  static const char* kTypes[] = {"NAME", "DATE", "EMAIL", "PHONE"};
  Rng rng(derive_seed(2, "acceptance:metrics"));
  std::size_t mismatches = 0, total_rows = 0;
  for (int corpus_no = 0; corpus_no < 50; ++corpus_no) {
    Corpus corpus;
    std::vector<oracle::Row> rows;
    const std::size_t n_tasks = 1 + rng.below(100);
    const std::string prompt(120, 'x');
    auto random_annotations = [&](std::size_t max_n) {
      Annotations out;
      for (std::size_t k = rng.below(max_n + 1); k > 0; --k) {
        const std::size_t s = rng.below(100);
        out.push_back({{s, s + 1 + rng.below(20)}, PiiType(kTypes[rng.below(4)]), "x"});
      }
      return out;
    };
    for (std::size_t t = 0; t < n_tasks; ++t) {
      Task task;
      task.id = "t" + std::to_string(t);
      task.locale = "pl-PL";
      task.phase = Phase::kProduction;
      task.prompt = prompt;
      corpus.add_task(task);
      const bool reviewed = rng.bernoulli(0.8);
      Annotations truth = rng.bernoulli(0.3) ? Annotations{} : random_annotations(3);
      if (reviewed) corpus.put_ground_truth({task.id, truth, "", {}});
      for (int s = 0; s < 2; ++s) {
        Annotations sub;
        const double u = rng.uniform();
        if (u < 0.4) {
          sub = truth;
        } else if (u < 0.6 && !truth.empty()) {
          sub = truth;
          sub[rng.below(sub.size())].type = PiiType(kTypes[rng.below(4)]);
        } else {
          sub = random_annotations(3);
        }
        Submission submission;
        submission.id = task.id + "-" + std::to_string(s);
        submission.task_id = task.id;
        submission.annotator_id = "a" + std::to_string(s);
        submission.annotations = sub;
        corpus.add_submission(submission);
        rows.push_back({reviewed, truth, sub});
      }
    }
    total_rows += rows.size();
    MetricsOptions opts;
    opts.group_by = {false, false};
    const auto reports = metrics_report(corpus, ref(), opts);
    if (reports.size() != 1) {
      ++mismatches;
      continue;
    }
    const MetricsReport& r = reports[0];
    const auto fine = oracle::count(rows, true);
    const auto coarse = oracle::count(rows, false);
    auto same = [](const ConfusionCounts& c, const oracle::Counts& o) {
      return c.tp == o.tp && c.fn == o.fn && c.fp == o.fp && c.tn == o.tn;
    };
    if (!same(r.fine, fine) || !same(r.coarse, coarse)) ++mismatches;
    if (r.recall_fine != oracle::recall(fine) || r.fpr_fine != oracle::fpr(fine)) ++mismatches;
    if (r.recall_coarse != oracle::recall(coarse) || r.fpr_coarse != oracle::fpr(coarse)) {
      ++mismatches;
    }
  }
  return {mismatches == 0, "50 corpora, " + std::to_string(total_rows) + " rows, " +
                               std::to_string(mismatches) + " mismatches"};
}

// --- 3 ---------------------------------------------------------------------

Outcome perfect_pipeline() {
  std::size_t tasks = 0, bad_ira = 0;
  bool ok = true;
  std::string worst;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    CorpusSpec spec;
    spec.seed = seed;
    for (const auto& l : ref().locales()) spec.locales.push_back({l.code, {8, 8, 8}});
    Corpus corpus = gen_corpus(spec, generator());
    for (const auto& [id, t] : corpus.tasks()) {
      const auto subs = corpus.submissions_for(id);
      if (task_agreement(std::span<const Submission* const>(subs)) != 1.0) ++bad_ira;
      ++tasks;
    }
    std::int64_t clock = 0;
    run_pipeline(corpus, WorkflowConfig{}, ref(), seed, clock);
    for (Reference reference : {Reference::kSyntheticTruth, Reference::kReview}) {
      MetricsOptions opts;
      opts.reference = reference;
      for (const auto& r : metrics_report(corpus, ref(), opts)) {
        for (const auto& v : {r.recall_fine, r.recall_coarse}) {
          if (v && *v != 1.0) ok = false;
        }
        for (const auto& v : {r.fpr_fine, r.fpr_coarse}) {
          if (v && *v != 0.0) ok = false;
        }
      }
    }
    // Small groups may lack negatives; the pooled rows must have both.
    MetricsOptions pooled;
    pooled.reference = Reference::kSyntheticTruth;
    pooled.group_by = {false, false};
    const auto all = metrics_report(corpus, ref(), pooled).at(0);
    if (all.recall_fine != 1.0 || all.recall_coarse != 1.0 || all.fpr_fine != 0.0 ||
        all.fpr_coarse != 0.0) {
      ok = false;
      worst = "pooled seed " + std::to_string(seed);
    }
  }
  ok = ok && bad_ira == 0;
  return {ok, std::to_string(tasks) + " tasks over 13 locales x 3 seeds, " +
                  std::to_string(bad_ira) + " with IRA != 1, recall 1 / FPR 0 at both grains" +
                  (ok ? "" : " violated " + worst)};
}

// --- 4 ---------------------------------------------------------------------

Outcome phase_trend() {
  CorpusSpec spec;
  spec.seed = 2026;
  for (const char* l : {"pl-PL", "pt-BR", "zh-CN"}) spec.locales.push_back({l, {500, 500, 500}});
  spec.profiles = default_phase_profiles();
  spec.pii_density = {0.9, 0.1};
  spec.negative_fraction = 0.25;
  Corpus corpus = gen_corpus(spec, generator());
  std::int64_t clock = 0;
  run_pipeline(corpus, WorkflowConfig{}, ref(), spec.seed, clock);

  MetricsOptions opts;
  opts.reference = Reference::kSyntheticTruth;
  opts.group_by = {false, true};
  const auto reports = metrics_report(corpus, ref(), opts);
  if (reports.size() != 3) return {false, "expected one report per phase"};
  std::array<double, 3> recall{}, fpr{}, miss{};
  for (std::size_t p = 0; p < 3; ++p) {
    if (!reports[p].recall_fine || !reports[p].fpr_fine) return {false, "undefined metric"};
    recall[p] = *reports[p].recall_fine;
    fpr[p] = *reports[p].fpr_fine;
    miss[p] = measured_miss_rate(corpus, kPhases[p]).value_or(-1.0);
  }
  const bool recall_ok = recall[0] < recall[1] && recall[1] < recall[2] && recall[2] >= 0.95;
  const bool fpr_ok = fpr[0] >= fpr[1] && fpr[1] >= fpr[2] && fpr[2] <= 0.01;
  bool miss_ok = true;
  for (std::size_t p = 0; p < 3; ++p) {
    if (std::fabs(miss[p] - spec.profiles[p].miss) > 0.05) miss_ok = false;
  }
  std::string detail = "recall " + fmt("%.4f/%.4f/%.4f", recall[0], recall[1], recall[2]) +
                       ", FPR " + fmt("%.4f/%.4f/%.4f", fpr[0], fpr[1], fpr[2]) +
                       ", miss " + fmt("%.4f/%.4f/%.4f", miss[0], miss[1], miss[2]) +
                       " (injected 0.30/0.10/0.02)";
  opts.group_by = {true, true};
  detail += "; per locale production recall";
  for (const auto& r : metrics_report(corpus, ref(), opts)) {
    if (*r.phase == Phase::kProduction) detail += " " + *r.locale + "=" + opt(r.recall_fine);
  }
  return {recall_ok && fpr_ok && miss_ok, detail};
}

// --- 5 ---------------------------------------------------------------------

Outcome routing() {
  CorpusSpec spec;
  spec.seed = 55;
  spec.locales = {{"sv-SE", {100, 100, 100}}, {"hi-IN", {100, 100, 100}}};
  spec.profiles = default_phase_profiles();
  Corpus corpus = gen_corpus(spec, generator());
  std::int64_t clock = 0;
  run_pipeline(corpus, WorkflowConfig{}, ref(), spec.seed, clock);
  std::size_t low = 0, low_ok = 0, pilot = 0, pilot_ok = 0;
  for (const auto& [id, t] : corpus.tasks()) {
    const auto& h = t.state.history();
    bool arbitrated = false;
    for (const auto& tr : h) arbitrated |= tr.to == TaskStatus::kArbitration;
    if (*t.ira < 0.85) {
      ++low;
      low_ok += arbitrated;
    }
    if (t.phase == Phase::kPilot) {
      ++pilot;
      pilot_ok += arbitrated && t.state.status() == TaskStatus::kReviewed;
    }
  }

  // 10,000 agreed production tasks.
  const PhasePolicy policy = default_policy(Phase::kProduction);
  std::size_t audited = 0;
  for (std::size_t i = 0; i < 10000; ++i) {
    Task t;
    t.id = "agreed-" + std::to_string(i);
    t.phase = Phase::kProduction;
    t.state.advance(TaskStatus::kAssigned, 1);
    t.state.advance(TaskStatus::kDualAnnotated, 2);
    Rng sampler(derive_seed(5, "route:" + t.id));
    audited += route(t, 1.0, policy, sampler, 3).to == TaskStatus::kArbitration;
  }
  const double fraction = static_cast<double>(audited) / 10000.0;
  const bool ok = low > 0 && low_ok == low && pilot == pilot_ok && fraction >= 0.10 &&
                  fraction <= 0.14;
  return {ok, std::to_string(low_ok) + "/" + std::to_string(low) +
                  " low-IRA tasks arbitrated, pilot coverage " + std::to_string(pilot_ok) + "/" +
                  std::to_string(pilot) + ", audited fraction " + fmt("%.4f", fraction)};
}

// --- 6 ---------------------------------------------------------------------

Outcome rca_fixture() {
  Corpus corpus;
  Rng rng(derive_seed(6, "acceptance:rca"));
  std::int64_t clock = 0;
  auto add = [&](const std::string& id, const std::vector<PiiType>& types,
                 const std::function<void(const std::string&, Annotations&)>& corrupt) {
    const auto g = generator().gen_prompt("pl-PL", LengthBin::kS, types, rng);
    Task t;
    t.id = id;
    t.locale = "pl-PL";
    t.domain = "finance";
    t.phase = Phase::kTraining;
    t.prompt = g.prompt;
    t.synthetic_truth = g.truth;
    t.state.advance(TaskStatus::kAssigned, ++clock);
    t.state.advance(TaskStatus::kDualAnnotated, ++clock);
    t.state.advance(TaskStatus::kArbitration, ++clock);
    corpus.add_task(t);
    Annotations wrong = g.truth;
    corrupt(g.prompt, wrong);
    corpus.add_submission({id + "-s1", id, "a1", g.truth, {}});
    corpus.add_submission({id + "-s2", id, "a2", wrong, {}});
    Review r;
    r.id = "r-" + id;
    r.task_id = id;
    r.reviewer_id = "qa-pl";
    r.chosen_submission_id = id + "-s1";
    r.ground_truth = g.truth;
    record_review(corpus, r, ref(), ++clock);
  };
  const PiiType cvv("CREDIT DEBIT CVV"), name("NAME");
  for (int i = 0; i < 5; ++i) {
    add("cvv-" + std::to_string(i), {cvv}, [](const std::string&, Annotations& a) {
      a[0].type = PiiType("PIN");
    });
  }
  for (int i = 0; i < 10; ++i) {
    add("jit-" + std::to_string(i), {name}, [](const std::string& prompt, Annotations& a) {
      Span& s = a[0].span;
      if (s.end < text::length(prompt)) {
        ++s.end;
      } else {
        --s.start;
      }
      a[0].text = text::slice(prompt, s.start, s.end);
    });
  }
  for (int i = 0; i < 20; ++i) {
    add("ok-" + std::to_string(i), {name, cvv}, [](const std::string&, Annotations&) {});
  }
  const auto pairs = confusion_pairs(corpus);
  const auto report = rca_report(corpus, {0, clock + 1});
  bool ok = pairs.count(Phase::kTraining) && !pairs.at(Phase::kTraining).empty();
  std::string top = "none";
  if (ok) {
    const auto& p = pairs.at(Phase::kTraining)[0];
    top = p.first.name + " <-> " + p.second.name + " x" + std::to_string(p.count);
    ok = p.first == cvv && p.second == PiiType("PIN") && p.count == 5;
  }
  const std::size_t span = report.counts.at(RcaCategory::kPiiSpan);
  ok = ok && span == 10;
  return {ok, "top pair " + top + ", PII_SPAN " + std::to_string(span)};
}

// --- 7 ---------------------------------------------------------------------

Outcome distribution_reports() {
  CorpusSpec spec;
  spec.seed = 77;
  for (const auto& l : ref().locales()) spec.locales.push_back({l.code, {30, 30, 30}});
  const Corpus corpus = gen_corpus(spec, generator());
  double worst = 0.0;
  std::size_t groups = 0;
  for (Axis axis : {Axis::kDomain, Axis::kLengthBin, Axis::kPiiCategory}) {
    for (Grouping g : {Grouping::kLocaleGroup, Grouping::kLocale, Grouping::kAll}) {
      DistributionOptions o;
      o.grouping = g;
      for (const auto& r : distributions(corpus, axis, ref(), o)) {
        double sum = 0.0;
        for (const auto& [k, v] : r.proportions) sum += v;
        worst = std::max(worst, std::fabs(sum - 1.0));
        ++groups;
      }
    }
  }
  const bool sums_ok = groups > 0 && worst <= 1e-9;

  // Length bins against a hand-counted word oracle.
  static const char32_t kSpaces[] = {U' ', U'\t', U'\n', U'\u00A0', U'\u3000', U'\u2009'};
  static const char32_t kLetters[] = {U'a', U'Z', U'\u0142', U'\u0436', U'\u5F20', U'\u0645', U'\u0967', U'7'};
  Rng rng(derive_seed(7, "acceptance:bins"));
  LengthBinConfig cfg;
  std::size_t bin_mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t target = rng.below(4000);
    std::u32string s;
    for (std::size_t w = 0; w < target; ++w) {
      for (std::size_t k = rng.below(3); k > 0; --k) s += kSpaces[rng.below(6)];
      for (std::size_t k = 1 + rng.below(6); k > 0; --k) s += kLetters[rng.below(8)];
    }
    if (rng.bernoulli(0.5)) s += kSpaces[rng.below(6)];
    const std::size_t words = oracle::words(s);
    const LengthBin want = words < 30 ? LengthBin::kS
                           : words < 240 ? LengthBin::kM
                           : words < 1200 ? LengthBin::kL
                                          : LengthBin::kXL;
    const BinResult got = length_bin(text::encode(s), cfg, "pl-PL");
    if (got.bin != want || got.count != words) ++bin_mismatches;
  }

  CorpusSpec names;
  names.seed = 40;
  names.locales = {{"pl-PL", {200, 200, 200}}, {"fi-FI", {200, 200, 200}}};
  names.pii_density = {0.0, 0.0, 1.0};
  names.type_mix[PiiType("NAME")] = 0.40;
  const Corpus named = gen_corpus(names, generator());
  DistributionOptions all;
  all.grouping = Grouping::kAll;
  const auto cats = distributions(named, Axis::kPiiCategory, ref(), all);
  double share = -1.0;
  std::size_t spans = 0;
  if (cats.size() == 1 && cats[0].proportions.count("NAME")) {
    share = cats[0].proportions.at("NAME");
    spans = cats[0].total;
  }
  const bool name_ok = std::fabs(share - 0.40) <= 0.02;
  return {sums_ok && bin_mismatches == 0 && name_ok,
          std::to_string(groups) + " groups, max |sum - 1| " + fmt("%.2e", worst) + "; " +
              std::to_string(bin_mismatches) + "/1000 length-bin mismatches; NAME share " +
              fmt("%.4f", share) + " over " + std::to_string(spans) + " spans"};
}

// --- 8 ---------------------------------------------------------------------

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome round_trip(const std::string& cli) {
  std::size_t corpora = 0, failures = 0;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    CorpusSpec spec;
    spec.seed = seed;
    spec.locales = {{"pl-PL", {10, 10, 10}}, {"ar-UAE", {10, 10, 10}}, {"fi-FI", {5, 5, 5}}};
    spec.profiles = default_phase_profiles();
    spec.profiles[0].span_jitter = 2;
    spec.profiles[0].jitter_rate = 0.5;
    Corpus corpus = gen_corpus(spec, generator());
    for (int stage = 0; stage < 2; ++stage) {
      if (stage == 1) {
        std::int64_t clock = 0;
        run_pipeline(corpus, WorkflowConfig{}, ref(), seed, clock);
      }
      std::stringstream buf;
      exchange::export_stream(corpus, buf);
      Corpus back;
      const auto report = exchange::import_stream(buf, back, ref());
      ++corpora;
      if (!(back == corpus) || !report.rejected.empty()) ++failures;
    }
    // Through a store directory and a reopen.
    const fs::path dir = fs::temp_directory_path() / ("piiqa-acceptance-" + std::to_string(seed));
    fs::remove_all(dir);
    const fs::path file = dir.string() + ".jsonl";
    exchange::export_corpus(corpus, file);
    {
      auto store = Store::open(dir, ref());
      store->ingest(file);
    }
    ++corpora;
    if (!(Store::open(dir, ref())->corpus() == corpus)) ++failures;
    fs::remove_all(dir);
    fs::remove(file);
  }

  std::string gen_detail = "gen determinism not checked (no CLI path)";
  bool gen_ok = false;
  if (!cli.empty()) {
    const fs::path a = fs::temp_directory_path() / "piiqa-acceptance-gen-a.jsonl";
    const fs::path b = fs::temp_directory_path() / "piiqa-acceptance-gen-b.jsonl";
    const std::string base = "\"" + cli + "\" gen --seed 7 --tasks 20 --out ";
    const int ra = std::system((base + "\"" + a.string() + "\"").c_str());
    const int rb = std::system((base + "\"" + b.string() + "\"").c_str());
    const std::string x = read_file(a), y = read_file(b);
    gen_ok = ra == 0 && rb == 0 && !x.empty() && x == y;
    gen_detail = "gen --seed 7 twice: " + std::to_string(x.size()) + " bytes, " +
                 (x == y ? "identical" : "different");
    fs::remove(a);
    fs::remove(b);
  }
  return {failures == 0 && gen_ok, std::to_string(corpora - failures) + "/" +
                                       std::to_string(corpora) + " round trips exact; " +
                                       gen_detail};
}

}  // namespace
}  // namespace piiqa

int main(int argc, char** argv) {
  using Clock = std::chrono::steady_clock;
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    int number;
    const char* name;
    double limit_s;  // 0: no runtime bound
    std::function<piiqa::Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "span overlap and IoU match index-set enumeration", 1.0, piiqa::iou_oracle},
      {2, "recall and FPR match row enumeration", 10.0, piiqa::metrics_oracle},
      {3, "zero-error annotators give perfect scores", 0.0, piiqa::perfect_pipeline},
      {4, "phase trend from simulated annotators", 60.0, piiqa::phase_trend},
      {5, "routing rules", 0.0, piiqa::routing},
      {6, "root-cause counts on a seeded fixture", 0.0, piiqa::rca_fixture},
      {7, "distribution reports", 0.0, piiqa::distribution_reports},
      {8, "exchange round trip and gen determinism", 0.0,
       [&cli] { return piiqa::round_trip(cli); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    piiqa::Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    bool pass = o.pass;
    char timing[96];
    if (c.limit_s > 0) {
      pass = pass && secs < c.limit_s;
      std::snprintf(timing, sizeof(timing), "%.3f s (limit %.0f s)", secs, c.limit_s);
    } else {
      std::snprintf(timing, sizeof(timing), "%.3f s", secs);
    }
    std::printf("%s criterion %d: %s; %s; %s\n", pass ? "PASS" : "FAIL", c.number, c.name,
                o.detail.c_str(), timing);
    std::fflush(stdout);
    failed += !pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
