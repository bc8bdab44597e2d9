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

#include <vector>

#include "doctest.h"
#include "fixtures.h"
#include "oracle.h"
#include "piiqa/agreement.h"
#include "piiqa/error.h"
#include "piiqa/random.h"

namespace piiqa {
namespace {

using testing::ann;
using testing::bare;
using testing::make_submission;

TEST_CASE("iou of simple spans") {
  CHECK(iou({0, 10}, {0, 10}) == 1.0);
  CHECK(iou({0, 10}, {10, 20}) == 0.0);
  CHECK(iou({0, 10}, {5, 15}) == doctest::Approx(5.0 / 15.0));
  CHECK(iou({0, 10}, {0, 11}) == doctest::Approx(10.0 / 11.0));
  CHECK(overlap_1d({3, 8}, {0, 5}) == 2);
  CHECK(iou({4, 4}, {4, 4}) == 0.0);
}

TEST_CASE("iou properties hold on random spans") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::size_t s1 = rng.below(50), s2 = rng.below(50);
    const Span a{s1, s1 + 1 + rng.below(20)};
    const Span b{s2, s2 + 1 + rng.below(20)};
    const double v = iou(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v == iou(b, a));
    CHECK(iou(a, a) == 1.0);
    CHECK(v == doctest::Approx(oracle::iou(a, b)).epsilon(1e-12));
    CHECK(overlap_1d(a, b) == oracle::overlap(a, b));
  }
}

TEST_CASE("matching is one-to-one and respects the threshold") {
  const std::vector<SpanAnnotation> left = {bare(0, 10, "NAME"), bare(20, 30, "EMAIL")};
  const std::vector<SpanAnnotation> right = {bare(0, 9, "NAME"), bare(1, 10, "NAME"),
                                             bare(40, 50, "PHONE")};
  const auto m = match_spans(left, right, 0.5);
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0].left == 0);
  CHECK(m.unmatched_left == std::vector<std::size_t>{1});
  CHECK(m.unmatched_right.size() == 2);
  CHECK(match_spans(left, right, 0.95).pairs.empty());
}

TEST_CASE("pair agreement components") {
  const std::string p = "Jan Kowalski, tel. 600 700 800";
  const auto a = make_submission("s1", "t", "a1", {ann(p, 0, 12, "NAME"), ann(p, 19, 30, "PHONE")});
  auto b = a;
  b.id = "s2";
  b.annotator_id = "a2";
  CHECK(pair_agreement(a, b).overall == 1.0);

  b.annotations[1].type = PiiType("NATIONAL ID");
  const auto typed = pair_agreement(a, b);
  CHECK(typed.span_score == 1.0);
  CHECK(typed.type_score == 0.5);
  CHECK(typed.overall < 1.0);

  const auto empty1 = make_submission("e1", "t", "a1", {});
  const auto empty2 = make_submission("e2", "t", "a2", {});
  CHECK(pair_agreement(empty1, empty2).overall == 1.0);
  CHECK(pair_agreement(empty1, a).overall == 0.0);

  const auto other = make_submission("o", "other", "a3", {});
  CHECK_THROWS_AS(pair_agreement(a, other), Error);
}

TEST_CASE("pair agreement is symmetric and bounded") {
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    Annotations x, y;
    for (std::size_t k = rng.below(4); k > 0; --k) {
      const std::size_t s = rng.below(40);
      x.push_back(bare(s, s + 1 + rng.below(8), rng.bernoulli(0.5) ? "NAME" : "EMAIL"));
    }
    for (std::size_t k = rng.below(4); k > 0; --k) {
      const std::size_t s = rng.below(40);
      y.push_back(bare(s, s + 1 + rng.below(8), rng.bernoulli(0.5) ? "NAME" : "EMAIL"));
    }
    const auto a = make_submission("a", "t", "x", x);
    const auto b = make_submission("b", "t", "y", y);
    const auto ab = pair_agreement(a, b), ba = pair_agreement(b, a);
    CHECK(ab.overall == doctest::Approx(ba.overall));
    CHECK(ab.overall >= 0.0);
    CHECK(ab.overall <= 1.0);
    CHECK(pair_agreement(a, a).overall == 1.0);
  }
}

TEST_CASE("task agreement needs two submissions") {
  const auto a = make_submission("a", "t", "x", {bare(0, 3, "NAME")});
  const std::vector<Submission> one = {a};
  CHECK_THROWS_AS(task_agreement(std::span<const Submission>(one)), Error);
  auto b = a;
  b.id = "b";
  auto c = a;
  c.id = "c";
  c.annotations.clear();
  const std::vector<Submission> three = {a, b, c};
  CHECK(task_agreement(std::span<const Submission>(three)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("annotator matrix averages shared tasks") {
  Corpus corpus;
  for (int i = 0; i < 2; ++i) {
    const std::string id = "t" + std::to_string(i);
    corpus.add_task(testing::make_task(id, "Jan Kowalski"));
    corpus.add_submission(make_submission(id + "a", id, "ann-1", {bare(0, 12, "NAME")}));
    corpus.add_submission(
        make_submission(id + "b", id, "ann-2", {bare(0, 12, i == 0 ? "NAME" : "EMAIL")}));
  }
  const auto m = annotator_matrix(corpus);
  CHECK(m.annotators() == std::vector<std::string>{"ann-1", "ann-2"});
  REQUIRE(m.cell("ann-1", "ann-2").has_value());
  CHECK(*m.cell("ann-1", "ann-2") == doctest::Approx(*m.cell("ann-2", "ann-1")));
  CHECK(m.support("ann-1", "ann-2") == 2);
  CHECK(*m.cell("ann-1", "ann-2") < 1.0);
}

TEST_CASE("worked agreement examples") {
  CHECK(overlap_1d({0, 10}, {5, 15}) == 5);
  CHECK(overlap_1d({2, 4}, {0, 10}) == 2);
  CHECK(overlap_1d({0, 5}, {5, 9}) == 0);

  const std::vector<SpanAnnotation> a = {bare(0, 4, "NAME"), bare(10, 14, "NAME")};
  const std::vector<SpanAnnotation> b = {bare(1, 4, "NAME")};
  const auto m = match_spans(a, b, 0.5);
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0].left == 0);
  CHECK(m.pairs[0].iou == doctest::Approx(0.75));
  CHECK(m.unmatched_left == std::vector<std::size_t>{1});
  const std::vector<SpanAnnotation> c = {bare(0, 10, "NAME")};
  const std::vector<SpanAnnotation> d = {bare(5, 15, "NAME")};
  CHECK(match_spans(c, d, 0.5).pairs.empty());

  const std::string p = "Anna Nowak";
  const auto x = make_submission("x", "t", "a1", {ann(p, 0, 10, "NAME")});
  const auto y = make_submission("y", "t", "a2", {ann(p, 0, 10, "DATE")});
  const auto br = pair_agreement(x, y);
  CHECK(br.span_score == 1.0);
  CHECK(br.type_score == 0.0);
  CHECK(br.text_score == 1.0);
  CHECK(br.overall == doctest::Approx(2.0 / 3.0));

  // Pair overalls 1.0, 0.5, 0.5.
  const auto s1 = make_submission("s1", "t", "a1", {bare(0, 3, "NAME"), bare(5, 8, "EMAIL")});
  auto s2 = s1;
  s2.id = "s2";
  const auto s3 = make_submission("s3", "t", "a3", {bare(0, 3, "NAME")});
  const std::vector<Submission> trio = {s1, s2, s3};
  CHECK(task_agreement(std::span<const Submission>(trio)) == doctest::Approx(2.0 / 3.0));

  AgreementMatrix mx;
  mx.add("a1", "a2", 0.8);
  mx.add("a2", "a1", 0.6);
  mx.add_self("a3");
  CHECK(*mx.cell("a1", "a2") == doctest::Approx(0.7));
  CHECK(mx.support("a1", "a2") == 2);
  CHECK_FALSE(mx.cell("a1", "a3").has_value());
}

}  // namespace
}  // namespace piiqa
