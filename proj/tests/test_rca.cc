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

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "fixtures.h"
#include "piiqa/error.h"
#include "piiqa/random.h"
#include "piiqa/rca.h"
#include "piiqa/workflow.h"

namespace piiqa {
namespace {

using testing::ann;
using testing::bare;
using testing::make_submission;

using Cats = std::set<RcaCategory>;

TEST_CASE("categorize single-cause disagreements") {
  CHECK(categorize({bare(0, 3, "CREDIT DEBIT CVV")}, {bare(0, 3, "PIN")}) ==
        Cats{RcaCategory::kPiiType});
  CHECK(categorize({bare(0, 10, "NAME")}, {bare(0, 11, "NAME")}) ==
        Cats{RcaCategory::kPiiSpan});
  CHECK(categorize({bare(0, 3, "NAME"), bare(5, 8, "DATE")},
                   {bare(0, 3, "DATE"), bare(5, 8, "NAME")})
            .count(RcaCategory::kSamePiiOrder));
  const Annotations three = {bare(0, 3, "NAME"), bare(5, 8, "DATE"), bare(10, 13, "EMAIL")};
  const Annotations two = {bare(0, 3, "NAME"), bare(5, 8, "DATE")};
  CHECK(categorize(three, two).count(RcaCategory::kNumberOfPiis));
  CHECK(categorize(three, three).empty());
  CHECK(categorize({}, {}).empty());
}

TEST_CASE("text differences beyond a boundary shift") {
  const Annotations gt = {{{0, 5}, PiiType("NAME"), "Marta"}};
  const Annotations sub = {{{0, 5}, PiiType("NAME"), "Marte"}};
  CHECK(categorize(gt, sub) == Cats{RcaCategory::kPiiText});
}

TEST_CASE("any difference yields a category") {
  Rng rng(5);
  const char* types[] = {"NAME", "DATE", "EMAIL"};
  for (int i = 0; i < 500; ++i) {
    Annotations a, b;
    for (std::size_t k = rng.below(3); k > 0; --k) {
      const std::size_t s = rng.below(30);
      a.push_back(bare(s, s + 1 + rng.below(5), types[rng.below(3)]));
    }
    for (std::size_t k = rng.below(3); k > 0; --k) {
      const std::size_t s = rng.below(30);
      b.push_back(bare(s, s + 1 + rng.below(5), types[rng.below(3)]));
    }
    auto sorted = [](Annotations x) {
      std::sort(x.begin(), x.end(), [](const auto& l, const auto& r) {
        return std::tie(l.span, l.type) < std::tie(r.span, r.type);
      });
      return x;
    };
    CHECK(categorize(a, b).empty() == (sorted(a) == sorted(b)));
  }
}

TEST_CASE("categorize_disagreement requires the same task") {
  GroundTruth gt{"t1", {bare(0, 3, "NAME")}, "r1", {}};
  CHECK(categorize_disagreement(gt, make_submission("s", "t1", "a", {bare(0, 3, "NAME")}))
            .empty());
  CHECK_THROWS_AS(categorize_disagreement(gt, make_submission("s", "t2", "a", {})), Error);
}

// Reviewed task whose first submission matches `truth` and whose second
// carries `wrong`.
void add_reviewed(Corpus& c, const std::string& id, const std::string& prompt,
                  const Annotations& truth, const Annotations& wrong, Phase phase,
                  std::int64_t at, const std::string& locale = "pl-PL") {
  Task t = testing::make_task(id, prompt, locale, phase);
  testing::to_dual_annotated(t);
  t.state.advance(TaskStatus::kArbitration, 3);
  c.add_task(t);
  c.add_submission(make_submission(id + "-1", id, "a1", truth));
  c.add_submission(make_submission(id + "-2", id, "a2", wrong));
  Review r;
  r.id = "r-" + id;
  r.task_id = id;
  r.reviewer_id = "qa";
  r.chosen_submission_id = id + "-1";
  r.ground_truth = truth;
  record_review(c, r, ReferenceData::builtin(), at);
}

TEST_CASE("confusion pairs rank seeded swaps") {
  Corpus c;
  const std::string p = "CVV 123, karta 4111111111111111";
  const Annotations truth = {ann(p, 4, 7, "CREDIT DEBIT CVV"), ann(p, 15, 31, "CREDIT DEBIT NUMBER")};
  for (int i = 0; i < 5; ++i) {
    add_reviewed(c, "cvv" + std::to_string(i), p, truth,
                 {ann(p, 4, 7, "PIN"), ann(p, 15, 31, "CREDIT DEBIT NUMBER")}, Phase::kPilot, 10);
  }
  for (int i = 0; i < 2; ++i) {
    add_reviewed(c, "num" + std::to_string(i), p, truth,
                 {ann(p, 4, 7, "CREDIT DEBIT CVV"), ann(p, 15, 31, "BANK ACCOUNT NUMBER")},
                 Phase::kPilot, 10);
  }
  const auto pairs = confusion_pairs(c);
  REQUIRE(pairs.count(Phase::kPilot));
  const auto& pilot = pairs.at(Phase::kPilot);
  REQUIRE(pilot.size() == 2);
  CHECK(pilot[0].first == PiiType("CREDIT DEBIT CVV"));
  CHECK(pilot[0].second == PiiType("PIN"));
  CHECK(pilot[0].count == 5);
  CHECK(pilot[1].count == 2);
  CHECK(confusion_pairs(c, 1).at(Phase::kPilot).size() == 1);
}

TEST_CASE("pilot confusion set is recovered from a seeded fixture") {
  Corpus c;
  int n = 0;
  for (const auto& [a, b] : ReferenceData::builtin().confusions("pilot")) {
    const std::string p = "value 0123456789";
    add_reviewed(c, "t" + std::to_string(n++), p, {ann(p, 6, 16, a.name)},
                 {ann(p, 6, 16, b.name)}, Phase::kPilot, 10, "pl-PL");
  }
  std::set<std::pair<std::string, std::string>> got;
  const auto pairs = confusion_pairs(c);
  for (const auto& cp : pairs.at(Phase::kPilot)) {
    got.insert({cp.first.name, cp.second.name});
  }
  const std::set<std::pair<std::string, std::string>> want = {
      {"BANK ACCOUNT NUMBER", "CREDIT DEBIT NUMBER"},
      {"CREDIT DEBIT CVV", "PIN"},
      {"HEALTH ID", "SSN"},
      {"SSN", "TIN"},
      {"AWS ACCESS KEY ID", "AWS SECRET KEY"}};
  CHECK(got == want);
}

TEST_CASE("error-free corpus has no confusions") {
  Corpus c;
  const std::string p = "Anna Nowak";
  add_reviewed(c, "t", p, {ann(p, 0, 10, "NAME")}, {ann(p, 0, 10, "NAME")}, Phase::kPilot, 1);
  CHECK(confusion_pairs(c).empty());
}

std::string words(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += i ? " w" : "w";
  return s;
}

TEST_CASE("length bins") {
  LengthBinConfig cfg;
  CHECK(length_bin(words(25), cfg, "pl-PL").bin == LengthBin::kS);
  CHECK(length_bin(words(29), cfg, "pl-PL").bin == LengthBin::kS);
  CHECK(length_bin(words(30), cfg, "pl-PL").bin == LengthBin::kM);
  CHECK(length_bin(words(100), cfg, "pl-PL").bin == LengthBin::kM);
  CHECK(length_bin(words(500), cfg, "pl-PL").bin == LengthBin::kL);
  const auto xl = length_bin(words(2000), cfg, "pl-PL");
  CHECK(xl.bin == LengthBin::kXL);
  CHECK_FALSE(xl.clamped);
  CHECK(length_bin(words(4000), cfg, "pl-PL").clamped);

  LengthBins chars;
  chars.count_chars = true;
  cfg.by_locale["zh-CN"] = chars;
  CHECK(length_bin("张伟住在北京", cfg, "zh-CN").count == 6);
  CHECK(length_bin("张伟住在北京", cfg, "pl-PL").count == 1);

  LengthBinConfig bad;
  bad.defaults.l_min = 10;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("axis and grouping names") {
  CHECK(parse_axis("domain") == Axis::kDomain);
  CHECK(parse_axis("length_bin") == Axis::kLengthBin);
  CHECK(parse_axis("pii_category") == Axis::kPiiCategory);
  try {
    parse_axis("colour");
    FAIL("unknown axis accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kUnknownAxis);
  }
  CHECK(parse_grouping("locale") == Grouping::kLocale);
}

TEST_CASE("distributions normalize per group") {
  Corpus c;
  const std::string p = "Anna Nowak, anna@example.com";
  for (int i = 0; i < 4; ++i) {
    for (const char* locale : {"nl-NL", "nl-BE", "pl-PL"}) {
      Task t = testing::make_task(std::string(locale) + std::to_string(i), p, locale);
      t.domain = i == 0 ? "health" : "finance";
      t.synthetic_truth = Annotations{ann(p, 0, 10, "NAME"), ann(p, 12, 28, "EMAIL")};
      c.add_task(t);
    }
  }
  const auto& ref = ReferenceData::builtin();
  const auto domains = distributions(c, Axis::kDomain, ref);
  REQUIRE(domains.size() == 2);
  for (const auto& d : domains) {
    double sum = 0;
    for (const auto& [k, v] : d.proportions) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.proportions.at("health") == doctest::Approx(0.25));
  }
  CHECK(domains[0].total + domains[1].total == 12);

  DistributionOptions all;
  all.grouping = Grouping::kAll;
  const auto cats = distributions(c, Axis::kPiiCategory, ref, all);
  REQUIRE(cats.size() == 1);
  CHECK(cats[0].total == 24);
  CHECK(cats[0].proportions.at("NAME") == doctest::Approx(0.5));

  Corpus one;
  Task t = testing::make_task("t", words(10));
  t.domain = "travel";
  one.add_task(t);
  const auto single = distributions(one, Axis::kDomain, ref, all);
  CHECK(single.at(0).proportions.at("travel") == 1.0);
  const auto bins = distributions(one, Axis::kLengthBin, ref, all);
  CHECK(bins.at(0).proportions.at("S") == 1.0);
  CHECK(distributions(Corpus{}, Axis::kDomain, ref).empty());
}

TEST_CASE("rca report counts a window and compares to the previous one") {
  Corpus c;
  const std::string p = "Anna Nowak mieszka tu";
  const Annotations truth = {ann(p, 0, 10, "NAME")};
  const Annotations jitter = {ann(p, 0, 11, "NAME")};
  for (int i = 0; i < 10; ++i) {
    add_reviewed(c, "a" + std::to_string(i), p, truth, jitter, Phase::kTraining, 100 + i);
  }
  for (int i = 0; i < 4; ++i) {
    add_reviewed(c, "b" + std::to_string(i), p, truth, jitter, Phase::kProduction, 200 + i,
                 "pt-BR");
  }
  const auto first = rca_report(c, {100, 200});
  CHECK(first.reviewed_tasks == 10);
  CHECK(first.rows == 20);
  CHECK(first.disagreement_rows == 10);
  CHECK(first.counts.at(RcaCategory::kPiiSpan) == 10);
  CHECK(first.counts.at(RcaCategory::kPiiType) == 0);
  CHECK(first.affected_locales.at("pl-PL") == 10);

  const auto second = rca_report(c, {200, 300});
  CHECK(second.counts.at(RcaCategory::kPiiSpan) == 4);
  CHECK(second.trend.at(RcaCategory::kPiiSpan) == -6);
  CHECK(second.trend_total < 0);

  const auto empty = rca_report(c, {1000, 2000});
  CHECK(empty.reviewed_tasks == 0);
  CHECK(empty.warning.has_value());
  CHECK_THROWS_AS(rca_report(c, {5, 1}), Error);
}

}  // namespace
}  // namespace piiqa
