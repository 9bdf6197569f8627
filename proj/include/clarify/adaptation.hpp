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
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clarify/casebase.hpp"
#include "clarify/error.hpp"
#include "clarify/ontology.hpp"
#include "clarify/retrieval.hpp"

namespace clarify {

enum class AdaptationStrategy { kNull, kConceptSubstitution };

inline std::string_view to_string(AdaptationStrategy s) {
  return s == AdaptationStrategy::kNull ? "null" : "concept-substitution";
}

inline std::optional<AdaptationStrategy> parse_adaptation_strategy(std::string_view name) {
  if (name == "null") return AdaptationStrategy::kNull;
  if (name == "concept-substitution") return AdaptationStrategy::kConceptSubstitution;
  return std::nullopt;
}

struct Substitution {
  std::string feature;
  ConceptId old_concept;  // value in the retrieved case
  ConceptId new_concept;  // value in the query
  ConceptId subsumer;     // least common subsumer of the pair
  std::size_t occurrences = 0;

  friend bool operator==(const Substitution&, const Substitution&) = default;
};

struct AdaptationRecord {
  Solution original;
  Solution adapted;
  std::vector<Substitution> substitutions;
  AdaptationStrategy strategy = AdaptationStrategy::kNull;

  friend bool operator==(const AdaptationRecord&, const AdaptationRecord&) = default;
};

/// Fits the retrieved solution to the query.
///
/// kNull copies the solution. kConceptSubstitution walks symbolic features
/// shared by both cases in name order; wherever the values differ, each
/// occurrence of the retrieved concept in concepts_involved becomes the
/// query's concept. Every differing feature is logged, even when nothing was
/// replaced. `action` and `parameters` are never touched.
inline AdaptationRecord adapt_solution(const Case& query, const RetrievalResult& retrieved,
                                       const Ontology& ont, AdaptationStrategy strategy) {
  AdaptationRecord record{retrieved.solution, retrieved.solution, {}, strategy};
  if (strategy == AdaptationStrategy::kNull) return record;

  for (const auto& [name, value] : retrieved.problem.features) {
    const auto* old_value = std::get_if<Symbolic>(&value);
    if (old_value == nullptr) continue;
    auto it = query.features.find(name);
    if (it == query.features.end()) continue;
    const auto* new_value = std::get_if<Symbolic>(&it->second);
    if (new_value == nullptr || new_value->concept_id == old_value->concept_id) continue;
    if (!ont.contains(new_value->concept_id)) {
      throw Error(ErrorCode::kUnknownConcept,
                  "substituted concept \"" + new_value->concept_id + "\" is not in the ontology",
                  Json{{"concept", new_value->concept_id}, {"feature", name}});
    }
    Substitution sub{name, old_value->concept_id, new_value->concept_id,
                     ont.least_common_subsumer(old_value->concept_id, new_value->concept_id), 0};
    for (ConceptId& c : record.adapted.concepts_involved) {
      if (c == sub.old_concept) {
        c = sub.new_concept;
        ++sub.occurrences;
      }
    }
    record.substitutions.push_back(std::move(sub));
  }
  return record;
}

inline Json adaptation_to_json(const AdaptationRecord& r) {
  Json subs = Json::array();
  for (const Substitution& s : r.substitutions) {
    subs.push_back(Json{{"feature", s.feature},
                        {"old", s.old_concept},
                        {"new", s.new_concept},
                        {"subsumer", s.subsumer},
                        {"occurrences", s.occurrences}});
  }
  return Json{{"strategy", to_string(r.strategy)},
              {"original", solution_to_json(r.original)},
              {"adapted", solution_to_json(r.adapted)},
              {"substitutions", subs}};
}

inline AdaptationRecord adaptation_from_json(const Json& j, const std::string& field) {
  using namespace json_io;
  check_keys(j, field, {"strategy", "original", "adapted", "substitutions"});
  AdaptationRecord r;
  const std::string name =
      get_string(require_key(j, field, "strategy"), child(field, "strategy"));
  auto strategy = parse_adaptation_strategy(name);
  if (!strategy) fail_field(child(field, "strategy"), "unknown strategy \"" + name + "\"");
  r.strategy = *strategy;
  r.original = solution_from_json(require_key(j, field, "original"), child(field, "original"));
  r.adapted = solution_from_json(require_key(j, field, "adapted"), child(field, "adapted"));
  const Json& subs =
      require_array(require_key(j, field, "substitutions"), child(field, "substitutions"));
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const std::string f = index(child(field, "substitutions"), i);
    check_keys(subs[i], f, {"feature", "old", "new", "subsumer", "occurrences"});
    const Json& occ = require_key(subs[i], f, "occurrences");
    if (!occ.is_number_unsigned()) fail_field(child(f, "occurrences"), "expected a count");
    r.substitutions.push_back(Substitution{
        get_string(require_key(subs[i], f, "feature"), child(f, "feature")),
        get_string(require_key(subs[i], f, "old"), child(f, "old")),
        get_string(require_key(subs[i], f, "new"), child(f, "new")),
        get_string(require_key(subs[i], f, "subsumer"), child(f, "subsumer")),
        occ.get<std::size_t>()});
  }
  return r;
}

}  // namespace clarify
