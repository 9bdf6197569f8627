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

#include <cstdlib>
#include <string>

#include "clarify/explanation.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace clarify {
namespace {

using testing::Rng;

class ExplanationExamples : public ::testing::Test {
 protected:
  Ontology ont_ = testing::sample_ontology();
};

TEST_F(ExplanationExamples, Glosses) {
  const auto one = generate_explanation(Solution{"a", {"car"}, {}}, ont_);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], (Gloss{"car", "a road vehicle"}));
  EXPECT_TRUE(generate_explanation(Solution{"a", {}, {}}, ont_).empty());
  const auto twice = generate_explanation(Solution{"a", {"car", "car"}, {}}, ont_);
  ASSERT_EQ(twice.size(), 2u);
  EXPECT_EQ(twice[0], twice[1]);
  try {
    generate_explanation(Solution{"a", {"car", "boat"}, {}}, ont_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownConcept);
    EXPECT_EQ(e.detail()["concept"], "boat");
  }
}

TEST_F(ExplanationExamples, LiteralTemplate) {
  const std::vector<Gloss> glosses = {{"car", "a road vehicle"}, {"paint", "a surface coating"}};
  EXPECT_EQ(render_explanation(glosses, {}, {}, ExplanationTemplate::kAlg2Literal),
            "car: a road vehicle paint: a surface coating");
  EXPECT_EQ(render_explanation({}, {}, {}, "alg2-literal"), "");
}

TEST_F(ExplanationExamples, UnknownTemplate) {
  try {
    render_explanation({}, {}, {}, "fancy");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownTemplate);
  }
  EXPECT_EQ(parse_template("rich"), ExplanationTemplate::kRich);
}

TEST(FormatFixed4, RoundsHalfToEven) {
  EXPECT_EQ(format_fixed4(0.03125), "0.0312");
  EXPECT_EQ(format_fixed4(0.09375), "0.0938");
  EXPECT_EQ(format_fixed4(1.0), "1.0000");
  EXPECT_EQ(format_fixed4(0.0), "0.0000");
  EXPECT_EQ(format_fixed4(2.0 / 3.0), "0.6667");
}

class ExplanationFixture : public ExplanationExamples {
 protected:
  CaseBase base_ = testing::sample_case_base(ont_);
  EngineConfig config_ = testing::sample_config();
  Case query_ = testing::sample_query();
  RetrievalResult retrieved_ = retrieve_similar_case(query_, base_, config_.similarity, ont_);
};

TEST_F(ExplanationFixture, RichMatchesGolden) {
  const AdaptationRecord adaptation =
      adapt_solution(query_, retrieved_, ont_, AdaptationStrategy::kConceptSubstitution);
  const Explanation e = build_explanation(retrieved_, adaptation, ont_, ExplanationTemplate::kRich);
  const auto golden = testing::golden_dir() / "explanation_rich.txt";
  if (std::getenv("CLARIFY_UPDATE_GOLDEN") != nullptr) testing::write_text(golden, e.rendered_text);
  ASSERT_TRUE(std::filesystem::exists(golden)) << golden;
  EXPECT_EQ(e.rendered_text, testing::read_text(golden));
}

TEST_F(ExplanationFixture, BuildsFromAdaptedSolution) {
  EXPECT_EQ(retrieved_.problem.case_id, "c1");
  const AdaptationRecord subst =
      adapt_solution(query_, retrieved_, ont_, AdaptationStrategy::kConceptSubstitution);
  const Explanation e = build_explanation(retrieved_, subst, ont_, ExplanationTemplate::kRich);
  ASSERT_EQ(e.concept_glosses.size(), 2u);
  EXPECT_EQ(e.concept_glosses[0].concept_id, "blue");
  for (const Gloss& g : e.concept_glosses) EXPECT_NE(g.concept_id, "red");
  EXPECT_EQ(e.retrieval_summary.similarity, retrieved_.similarity);
  EXPECT_EQ(e.retrieval_summary.breakdown, retrieved_.breakdown);
  EXPECT_NE(e.rendered_text.find("blue: the color of a clear sky"), std::string::npos);

  const AdaptationRecord null_record =
      adapt_solution(query_, retrieved_, ont_, AdaptationStrategy::kNull);
  const Explanation n = build_explanation(retrieved_, null_record, ont_, ExplanationTemplate::kAlg2Literal);
  EXPECT_EQ(n.concept_glosses, generate_explanation(retrieved_.solution, ont_));
  EXPECT_EQ(n.rendered_text, "red: the color of blood paint: a surface coating");
  EXPECT_EQ(explanation_from_json(explanation_to_json(e), "explanation"), e);
  EXPECT_EQ(explanation_from_json(explanation_to_json(n), "explanation"), n);
}

TEST_F(ExplanationFixture, InconsistentInputs) {
  AdaptationRecord adaptation =
      adapt_solution(query_, retrieved_, ont_, AdaptationStrategy::kNull);
  adaptation.original.action = "other";
  try {
    build_explanation(retrieved_, adaptation, ont_, ExplanationTemplate::kRich);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentInputs);
  }
}

TEST(ExplanationProperties, LiteralFidelityCompletenessDeterminism) {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const Ontology ont = testing::random_ontology(rng, 2, 20);
    const Solution solution = testing::random_solution(rng, ont, 6);
    const auto glosses = generate_explanation(solution, ont);
    ASSERT_EQ(glosses.size(), solution.concepts_involved.size());
    EXPECT_EQ(render_explanation(glosses, {}, {}, ExplanationTemplate::kAlg2Literal),
              oracle::generate_explanation_literal(solution, ont.concepts()));

    const RetrievalResult retrieved{Case{"r", {{"x", Flag{true}}}}, solution, 1.0,
                                    SimilarityBreakdown{{{"x", 1.0, 1.0, true}}, 1.0}};
    const AdaptationRecord adaptation{solution, solution, {}, AdaptationStrategy::kNull};
    const Explanation e = build_explanation(retrieved, adaptation, ont, ExplanationTemplate::kRich);
    for (const ConceptId& c : solution.concepts_involved) {
      EXPECT_NE(e.rendered_text.find("  " + c + ": "), std::string::npos) << c;
    }
    EXPECT_FALSE(e.rendered_text.empty());
    EXPECT_EQ(build_explanation(retrieved, adaptation, ont, ExplanationTemplate::kRich).rendered_text,
              e.rendered_text);
  }
}

}  // namespace
}  // namespace clarify
