/*
 * Copyright 2026 The Clarify Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <bit>
#include <cstdint>
#include <string>

#include "clarify/casebase.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

namespace clarify {
namespace {

using testing::Rng;

std::string entry_doc(const std::string& id, const std::string& features,
                      const std::string& concepts = "[]") {
  return R"({"case_id": ")" + id + R"(", "features": )" + features +
         R"(, "solution": {"action": "approve", "concepts_involved": )" + concepts + "}}";
}

std::string base_doc(std::initializer_list<std::string> entries) {
  std::string out = R"({"cases": [)";
  bool first = true;
  for (const auto& e : entries) {
    out += (first ? "" : ",") + e;
    first = false;
  }
  return out + "]}";
}

const char* kCarFeature = R"({"kind": {"type": "symbolic", "concept": "car"}})";

Error load_error(const std::string& doc, const Ontology& ont) {
  try {
    load_case_base(doc, ont);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "loaded: " << doc;
  return Error(ErrorCode::kInternal, "");
}

TEST(LoadCaseBase, KeepsFileOrder) {
  const Ontology ont = testing::taxonomy();
  const CaseBase base = load_case_base(
      base_doc({entry_doc("z9", kCarFeature, R"(["car"])"), entry_doc("a1", kCarFeature)}), ont);
  ASSERT_EQ(base.size(), 2u);
  EXPECT_EQ(base.entries()[0].problem.case_id, "z9");
  EXPECT_EQ(base.entries()[1].problem.case_id, "a1");
  EXPECT_EQ(base.entries()[0].solution.concepts_involved, std::vector<ConceptId>{"car"});
  EXPECT_EQ(base.source_version(), 0u);
}

TEST(LoadCaseBase, DuplicateIdIsAValidationError) {
  const Ontology ont = testing::taxonomy();
  const Error e = load_error(base_doc({entry_doc("c1", kCarFeature), entry_doc("c1", kCarFeature)}), ont);
  EXPECT_EQ(e.code(), ErrorCode::kValidation);
  EXPECT_EQ(e.detail()["case_id"], "c1");
  EXPECT_NE(std::string(e.what()).find("c1"), std::string::npos);
}

TEST(LoadCaseBase, UnknownSymbolicConcept) {
  const Ontology ont = testing::taxonomy();
  const Error e = load_error(
      base_doc({entry_doc("c1", R"({"kind": {"type": "symbolic", "concept": "unicorn"}})")}), ont);
  EXPECT_EQ(e.code(), ErrorCode::kValidation);
  EXPECT_NE(std::string(e.what()).find("unicorn"), std::string::npos);
  EXPECT_EQ(e.detail()["violations"][0]["kind"], "UnknownConcept");
}

TEST(LoadCaseBase, UnknownSolutionConcept) {
  const Ontology ont = testing::taxonomy();
  const Error e = load_error(base_doc({entry_doc("c1", kCarFeature, R"(["car", "ghost"])")}), ont);
  EXPECT_EQ(e.code(), ErrorCode::kValidation);
  EXPECT_EQ(e.detail()["violations"][0]["feature"], "solution.concepts_involved[1]");
}

TEST(LoadCaseBase, RangesMustAgreeAcrossEntries) {
  const Ontology ont = testing::taxonomy();
  const Error e = load_error(
      base_doc({entry_doc("c1", R"({"age": {"type": "numeric", "value": 3, "range": [0, 10]}})"),
                entry_doc("c2", R"({"age": {"type": "numeric", "value": 3, "range": [0, 20]}})")}),
      ont);
  EXPECT_EQ(e.detail()["case_id"], "c2");
  EXPECT_EQ(e.detail()["violations"][0]["kind"], "RangeMismatch");
}

TEST(LoadCaseBase, StrictSchema) {
  const Ontology ont = testing::taxonomy();
  EXPECT_EQ(load_error(R"({"cases": [], "version": 2})", ont).code(), ErrorCode::kParse);
  EXPECT_EQ(load_error(base_doc({entry_doc("c1", R"({"k": {"type": "fuzzy", "value": 1}})")}), ont).code(),
            ErrorCode::kParse);
  EXPECT_EQ(load_error(base_doc({entry_doc("c1", R"({"k": {"type": "flag", "value": 1}})")}), ont).code(),
            ErrorCode::kParse);
  EXPECT_EQ(load_error("{\"cases\": [", ont).code(), ErrorCode::kParse);
}

TEST(ValidateCase, ReportsEveryViolation) {
  const Ontology ont = testing::taxonomy();
  Case ok{"c", {{"n", Numeric{5, 0, 10}}, {"s", Symbolic{"car"}}, {"f", Flag{true}}, {"t", Text{"x"}}}};
  EXPECT_TRUE(validate_case(ok, ont).empty());

  Case out_of_range{"c", {{"n", Numeric{12, 0, 10}}}};
  const auto vs = validate_case(out_of_range, ont);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ViolationKind::kRangeViolation);
  EXPECT_EQ(vs[0].feature, "n");
  EXPECT_NE(vs[0].message.find("12"), std::string::npos);
  EXPECT_NE(vs[0].message.find("[0, 10]"), std::string::npos);

  Case two_bad{"c", {{"zeta", Symbolic{"unicorn"}}, {"alpha", Numeric{-1, 0, 10}}}};
  const auto both = validate_case(two_bad, ont);
  ASSERT_EQ(both.size(), 2u);
  EXPECT_EQ(both[0].feature, "alpha");
  EXPECT_EQ(both[1].feature, "zeta");

  Case empty{"", {}};
  const auto e = validate_case(empty, ont);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].kind, ViolationKind::kEmptyCaseId);
  EXPECT_EQ(e[1].kind, ViolationKind::kEmptyFeatures);

  Case bad_range{"c", {{"n", Numeric{1, 5, 5}}}};
  EXPECT_EQ(validate_case(bad_range, ont)[0].kind, ViolationKind::kInvalidRange);
}

TEST(AddCase, GrowsAndBumpsVersion) {
  const Ontology ont = testing::taxonomy();
  const CaseBase empty;
  const CaseBase one = add_case(empty, Case{"c1", {{"s", Symbolic{"car"}}}}, Solution{"go", {}, {}}, ont);
  EXPECT_EQ(one.size(), 1u);
  EXPECT_EQ(one.source_version(), empty.source_version() + 1);
  EXPECT_TRUE(empty.empty());

  try {
    add_case(one, Case{"c1", {{"s", Symbolic{"truck"}}}}, Solution{"go", {}, {}}, ont);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateCaseId);
  }
  try {
    add_case(one, Case{"c2", {{"s", Symbolic{"unicorn"}}}}, Solution{"go", {}, {}}, ont);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
  }
  EXPECT_EQ(one.size(), 1u);
  EXPECT_EQ(one.source_version(), 1u);
}

TEST(SaveCaseBase, EmptyBase) {
  EXPECT_EQ(save_case_base(CaseBase{}), "{\n  \"cases\": []\n}\n");
  EXPECT_EQ(load_case_base(save_case_base(CaseBase{}), testing::taxonomy()), CaseBase{});
}

TEST(CaseBaseProperties, RoundTripIsIdentityAndBitExact) {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Ontology ont = testing::random_ontology(rng);
    const auto schema = testing::random_schema(rng, static_cast<std::size_t>(rng.uniform(1, 6)));
    const CaseBase base =
        testing::random_case_base(rng, schema, ont, static_cast<std::size_t>(rng.uniform(0, 12)), 0.2);
    const std::string text = save_case_base(base);
    const CaseBase again = load_case_base(text, ont);
    ASSERT_EQ(again, base);
    EXPECT_EQ(save_case_base(again), text);
    for (std::size_t i = 0; i < base.size(); ++i) {
      for (const auto& [name, v] : base.entries()[i].problem.features) {
        if (const auto* n = std::get_if<Numeric>(&v)) {
          const auto& m = std::get<Numeric>(again.entries()[i].problem.features.at(name));
          EXPECT_EQ(std::bit_cast<std::uint64_t>(n->value), std::bit_cast<std::uint64_t>(m.value));
        }
      }
    }
  }
}

TEST(CaseBaseProperties, AddIsTheOnlyGrowthPath) {
  Rng rng(5);
  const Ontology ont = testing::random_ontology(rng, 5, 10);
  const auto schema = testing::random_schema(rng, 4);
  CaseBase base;
  for (int n = 1; n <= 25; ++n) {
    Case c = testing::random_case(rng, schema, ont, "id" + std::to_string(n), 0.3);
    ASSERT_TRUE(validate_case(c, ont).empty());
    base = add_case(base, c, testing::random_solution(rng, ont), ont);
    EXPECT_EQ(base.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(base.source_version(), static_cast<std::uint64_t>(n));
  }
}

}  // namespace
}  // namespace clarify
