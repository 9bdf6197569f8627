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

#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "clarify/adaptation.hpp"
#include "clarify/casebase.hpp"
#include "clarify/error.hpp"
#include "clarify/ontology.hpp"
#include "clarify/retrieval.hpp"
#include "clarify/similarity.hpp"

namespace clarify {

struct Gloss {
  ConceptId concept_id;
  std::string definition;

  friend bool operator==(const Gloss&, const Gloss&) = default;
};

enum class ExplanationTemplate { kAlg2Literal, kRich };

inline std::string_view to_string(ExplanationTemplate t) {
  return t == ExplanationTemplate::kAlg2Literal ? "alg2-literal" : "rich";
}

inline std::optional<ExplanationTemplate> find_template(std::string_view name) {
  if (name == "alg2-literal") return ExplanationTemplate::kAlg2Literal;
  if (name == "rich") return ExplanationTemplate::kRich;
  return std::nullopt;
}

inline ExplanationTemplate parse_template(std::string_view name) {
  if (auto t = find_template(name)) return *t;
  throw Error(ErrorCode::kUnknownTemplate,
              "unknown template \"" + std::string(name) + "\"",
              Json{{"field", "template"}, {"value", std::string(name)}});
}

struct RetrievalSummary {
  std::string case_id;
  double similarity = 0.0;
  SimilarityBreakdown breakdown;

  friend bool operator==(const RetrievalSummary&, const RetrievalSummary&) = default;
};

struct Explanation {
  std::vector<Gloss> concept_glosses;  // one per concepts_involved element
  RetrievalSummary retrieval_summary;
  AdaptationRecord adaptation_summary;
  ExplanationTemplate template_id = ExplanationTemplate::kRich;
  std::string rendered_text;

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

/// Fixed four-decimal rendering, ties to even, independent of locale.
inline std::string format_fixed4(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, 4);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

/// Pairs each concept of the solution, in order and with repeats, with its
/// ontology definition.
inline std::vector<Gloss> generate_explanation(const Solution& solution,
                                               const Ontology& ont) {
  std::vector<Gloss> glosses;
  glosses.reserve(solution.concepts_involved.size());
  for (const ConceptId& c : solution.concepts_involved) {
    glosses.push_back(Gloss{c, get_concept_definition(ont, c)});
  }
  return glosses;
}

namespace detail {

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::string render_literal(const std::vector<Gloss>& glosses) {
  std::string out;
  for (const Gloss& g : glosses) {
    if (!out.empty()) out += ' ';
    out += g.concept_id;
    out += ": ";
    out += g.definition;
  }
  return out;
}

inline std::string render_rich(const std::vector<Gloss>& glosses,
                               const RetrievalSummary& retrieval,
                               const AdaptationRecord& adaptation) {
  std::string out;
  out += "Decision: " + adaptation.adapted.action + "\n";
  out += "Nearest case: " + retrieval.case_id + " (similarity " +
         format_fixed4(retrieval.similarity) + ")\n";

  out += "\nSimilarity breakdown:\n";
  std::size_t width = std::string_view("feature").size();
  for (const FeatureScore& f : retrieval.breakdown.per_feature) {
    width = std::max(width, f.feature.size());
  }
  out += "  " + pad("feature", width) + "  local   weight  included\n";
  for (const FeatureScore& f : retrieval.breakdown.per_feature) {
    out += "  " + pad(f.feature, width) + "  " + format_fixed4(f.local_similarity) + "  " +
           format_fixed4(f.weight) + "  " + (f.included ? "yes" : "no") + "\n";
  }
  out += "  total" + std::string(width > 5 ? width - 5 : 0, ' ') + "  " +
         format_fixed4(retrieval.breakdown.total) + "\n";

  out += "\nAdaptation (" + std::string(to_string(adaptation.strategy)) + "):\n";
  if (adaptation.strategy == AdaptationStrategy::kNull) {
    out += "  solution reused unchanged\n";
  } else if (adaptation.substitutions.empty()) {
    out += "  no substitutions\n";
  } else {
    for (const Substitution& s : adaptation.substitutions) {
      out += "  " + s.feature + ": " + s.old_concept + " -> " + s.new_concept +
             " (common subsumer " + s.subsumer + ", " + std::to_string(s.occurrences) +
             (s.occurrences == 1 ? " occurrence" : " occurrences") + " replaced)\n";
    }
  }

  out += "\nConcepts:\n";
  if (glosses.empty()) {
    out += "  none\n";
  } else {
    for (const Gloss& g : glosses) out += "  " + g.concept_id + ": " + g.definition + "\n";
  }
  return out;
}

}  // namespace detail

inline std::string render_explanation(const std::vector<Gloss>& glosses,
                                      const RetrievalSummary& retrieval,
                                      const AdaptationRecord& adaptation,
                                      ExplanationTemplate template_id) {
  switch (template_id) {
    case ExplanationTemplate::kAlg2Literal:
      return detail::render_literal(glosses);
    case ExplanationTemplate::kRich:
      return detail::render_rich(glosses, retrieval, adaptation);
  }
  throw Error(ErrorCode::kUnknownTemplate, "unknown template");
}

inline std::string render_explanation(const std::vector<Gloss>& glosses,
                                      const RetrievalSummary& retrieval,
                                      const AdaptationRecord& adaptation,
                                      std::string_view template_name) {
  return render_explanation(glosses, retrieval, adaptation, parse_template(template_name));
}

inline Explanation build_explanation(const RetrievalResult& retrieval,
                                     const AdaptationRecord& adaptation,
                                     const Ontology& ont,
                                     ExplanationTemplate template_id) {
  if (!(adaptation.original == retrieval.solution)) {
    throw Error(ErrorCode::kInconsistentInputs,
                "adaptation record does not start from the retrieved solution",
                Json{{"case_id", retrieval.problem.case_id}});
  }
  Explanation e;
  e.concept_glosses = generate_explanation(adaptation.adapted, ont);
  e.retrieval_summary =
      RetrievalSummary{retrieval.problem.case_id, retrieval.similarity, retrieval.breakdown};
  e.adaptation_summary = adaptation;
  e.template_id = template_id;
  e.rendered_text =
      render_explanation(e.concept_glosses, e.retrieval_summary, adaptation, template_id);
  return e;
}

inline Json explanation_to_json(const Explanation& e) {
  Json glosses = Json::array();
  for (const Gloss& g : e.concept_glosses) {
    glosses.push_back(Json{{"concept", g.concept_id}, {"definition", g.definition}});
  }
  return Json{{"concept_glosses", glosses},
              {"retrieval_summary",
               {{"case_id", e.retrieval_summary.case_id},
                {"similarity", e.retrieval_summary.similarity},
                {"breakdown", breakdown_to_json(e.retrieval_summary.breakdown)}}},
              {"adaptation_summary", adaptation_to_json(e.adaptation_summary)},
              {"template", to_string(e.template_id)},
              {"rendered_text", e.rendered_text}};
}

inline Explanation explanation_from_json(const Json& j, const std::string& field) {
  using namespace json_io;
  check_keys(j, field, {"concept_glosses", "retrieval_summary", "adaptation_summary",
                        "template", "rendered_text"});
  Explanation e;
  const std::string gf = child(field, "concept_glosses");
  const Json& glosses = require_array(require_key(j, field, "concept_glosses"), gf);
  for (std::size_t i = 0; i < glosses.size(); ++i) {
    const std::string f = index(gf, i);
    check_keys(glosses[i], f, {"concept", "definition"});
    e.concept_glosses.push_back(
        Gloss{get_string(require_key(glosses[i], f, "concept"), child(f, "concept")),
              get_string(require_key(glosses[i], f, "definition"), child(f, "definition"))});
  }
  const std::string rf = child(field, "retrieval_summary");
  const Json& rs = require_key(j, field, "retrieval_summary");
  check_keys(rs, rf, {"case_id", "similarity", "breakdown"});
  e.retrieval_summary.case_id = get_string(require_key(rs, rf, "case_id"), child(rf, "case_id"));
  e.retrieval_summary.similarity =
      get_number(require_key(rs, rf, "similarity"), child(rf, "similarity"));
  e.retrieval_summary.breakdown =
      breakdown_from_json(require_key(rs, rf, "breakdown"), child(rf, "breakdown"));
  e.adaptation_summary = adaptation_from_json(require_key(j, field, "adaptation_summary"),
                                              child(field, "adaptation_summary"));
  const std::string name = get_string(require_key(j, field, "template"), child(field, "template"));
  auto t = find_template(name);
  if (!t) fail_field(child(field, "template"), "unknown template \"" + name + "\"");
  e.template_id = *t;
  e.rendered_text =
      get_string(require_key(j, field, "rendered_text"), child(field, "rendered_text"));
  return e;
}

}  // namespace clarify
