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

#include <set>
#include <string>

#include "doctest.h"
#include "fixtures.h"
#include "piiqa/corpus.h"
#include "piiqa/error.h"
#include "piiqa/pii_model.h"
#include "piiqa/random.h"
#include "piiqa/text.h"

namespace piiqa {
namespace {

using testing::ann;

TEST_CASE("utf8 offsets count scalar values") {
  const std::string s = "Zażółć 张伟 محمد";
  CHECK(text::length(s) == 14);
  CHECK(text::slice(s, 7, 9) == "张伟");
  CHECK(text::slice(s, 10, 14) == "محمد");
  CHECK(text::byte_offset(s, 7) == std::string("Zażółć ").size());
  CHECK(text::encode(text::decode(s)) == s);
}

TEST_CASE("malformed utf8 is rejected") {
  CHECK_FALSE(text::is_valid_utf8("\xC3"));
  CHECK_FALSE(text::is_valid_utf8("\xC0\xAF"));        // overlong '/'
  CHECK_FALSE(text::is_valid_utf8("\xED\xA0\x80"));    // surrogate
  CHECK_THROWS_AS(text::decode("\xFF"), Error);
}

TEST_CASE("word counts split on unicode whitespace") {
  CHECK(text::count_words("") == 0);
  CHECK(text::count_words("  one\ttwo　three four ") == 4);
  CHECK(text::count_non_space("a b　c") == 3);
  CHECK(text::collapse_space("  a \n\t b  ") == "a b");
}

TEST_CASE("labels normalize through the alias table") {
  const auto& ref = ReferenceData::builtin();
  CHECK(normalize_label("  credit   card\tnumber ") == "CREDIT CARD NUMBER");
  CHECK(ref.canonical_type("cvv").name == "CREDIT DEBIT CVV");
  CHECK(ref.canonical_type("Phone Number").name == "PHONE");
  CHECK(ref.canonical_type("name").name == "NAME");
  CHECK_THROWS_AS(ref.canonical_type("FAVOURITE COLOUR"), Error);
  CHECK_THROWS_AS(ref.canonical_type("   "), Error);
}

TEST_CASE("registry covers 13 locales with the published shape") {
  const auto& ref = ReferenceData::builtin();
  CHECK(ref.locales().size() == 13);
  CHECK(ref.entries().size() == ref.manifest().at("total"));
  CHECK(ref.entries().size() >= 300);
  CHECK(ref.entries().size() <= 380);
  for (const auto& l : ref.locales()) {
    CHECK(ref.registry_for(l.code).size() == ref.manifest().at(l.code));
  }
  CHECK(ref.registry_for("hi-IN").count(PiiType("AADHAR ID")));
  CHECK(ref.registry_for("hi-IN").count(PiiType("PAN ID")));
  CHECK_FALSE(ref.registry_for("pl-PL").count(PiiType("AADHAR ID")));
  CHECK(ref.registry_for("pl-PL").count(PiiType("TIN")));
  CHECK_FALSE(ref.registry_for("fi-FI").count(PiiType("TIN")));
  CHECK(ref.locale_specific(PiiType("AADHAR ID")));
  CHECK_FALSE(ref.locale_specific(PiiType("NAME")));
}

TEST_CASE("every registry type maps to one of 18 categories") {
  const auto& ref = ReferenceData::builtin();
  std::set<std::string> seen;
  for (const auto& t : ref.types()) seen.insert(ref.category_of(t).name);
  CHECK(ref.categories().size() == 18);
  CHECK(seen.size() == 18);
  CHECK(ref.category_of(PiiType("CREDIT DEBIT CVV")).name == "CREDIT CARD");
  CHECK(ref.category_of(PiiType("USERNAME")).name == "LOGIN INFO");
  CHECK(ref.category_of(PiiType("LICENSE PLATE")).name == "VEHICLE NUMBER");
}

TEST_CASE("locale aliases resolve") {
  const auto& ref = ReferenceData::builtin();
  CHECK(ref.locale("ar-AFB").code == "ar-UAE");
  CHECK(ref.locale("vi-VI").code == "vi-VN");
  CHECK(ref.locale("nl-BE").group == ref.locale("nl-NL").group);
  CHECK_THROWS_AS(ref.locale("xx-XX"), Error);
  CHECK(is_locale_code("pl-PL"));
  CHECK_FALSE(is_locale_code("polish"));
}

TEST_CASE("annotation validation") {
  const auto& ref = ReferenceData::builtin();
  const std::string p = "Jan Kowalski, PESEL 44051401458";
  CHECK(validate_annotation(p, ann(p, 0, 12, "NAME"), "pl-PL", ref) == Violation::kOk);
  CHECK(validate_annotation(p, {{0, 40}, PiiType("NAME"), "x"}, "pl-PL", ref) ==
        Violation::kSpanOutOfBounds);
  CHECK(validate_annotation(p, {{3, 3}, PiiType("NAME"), ""}, "pl-PL", ref) ==
        Violation::kSpanOutOfBounds);
  CHECK(validate_annotation(p, {{0, 3}, PiiType("NAME"), "Ja"}, "pl-PL", ref) ==
        Violation::kTextMismatch);
  CHECK(validate_annotation(p, ann(p, 20, 31, "AADHAR ID"), "pl-PL", ref) ==
        Violation::kTypeNotInLocale);
}

TEST_CASE("reference data loads from a directory like the built-in copy") {
  const auto loaded = ReferenceData::load(PIIQA_SOURCE_DIR "/data");
  CHECK(loaded.entries().size() == ReferenceData::builtin().entries().size());
  CHECK_THROWS_AS(ReferenceData::load("/nonexistent/piiqa"), Error);
}

TEST_CASE("rng streams are reproducible and independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  CHECK(derive_seed(1, "task:x") == derive_seed(1, "task:x"));
  CHECK(derive_seed(1, "task:x") != derive_seed(1, "task:y"));
  CHECK(derive_seed(1, "task:x", 0) != derive_seed(1, "task:x", 1));
  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    const auto k = r.between(-3, 3);
    CHECK((k >= -3 && k <= 3));
  }
}

TEST_CASE("task lifecycle only moves forward") {
  TaskState s;
  CHECK_THROWS_AS(s.advance(TaskStatus::kDualAnnotated, 1), Error);
  s.advance(TaskStatus::kAssigned, 1);
  s.advance(TaskStatus::kDualAnnotated, 2);
  CHECK_THROWS_AS(s.advance(TaskStatus::kReviewed, 3), Error);
  s.advance(TaskStatus::kArbitration, 3);
  s.advance(TaskStatus::kReviewed, 4);
  CHECK_THROWS_AS(s.advance(TaskStatus::kAccepted, 5), Error);
  CHECK(TaskState::replay(s.history()) == s);

  // Every status pair outside the lifecycle is refused.
  const TaskStatus all[] = {TaskStatus::kCreated,  TaskStatus::kAssigned,
                            TaskStatus::kDualAnnotated, TaskStatus::kAccepted,
                            TaskStatus::kArbitration,   TaskStatus::kReviewed};
  std::size_t allowed = 0;
  for (auto from : all) {
    for (auto to : all) allowed += TaskState::allowed(from, to);
  }
  CHECK(allowed == 5);
}

TEST_CASE("corpus keeps referential integrity") {
  Corpus c;
  c.add_task(testing::make_task("t1", "hello"));
  CHECK_THROWS_AS(c.add_task(testing::make_task("t1", "again")), Error);
  CHECK_THROWS_AS(c.add_submission(testing::make_submission("s1", "nope", "a1", {})), Error);
  c.add_submission(testing::make_submission("s2", "t1", "a2", {}));
  c.add_submission(testing::make_submission("s1", "t1", "a1", {}));
  const auto subs = c.submissions_for("t1");
  REQUIRE(subs.size() == 2);
  CHECK(subs[0]->id == "s1");
  Review r;
  r.id = "r1";
  r.task_id = "t1";
  r.chosen_submission_id = "missing";
  CHECK_THROWS_AS(c.add_review(r), Error);
}

}  // namespace
}  // namespace piiqa
