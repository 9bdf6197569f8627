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

// Independent reference implementations. None of these call into the
// library's ontology queries, retrieval, or rendering; they work from the
// raw concept lists and re-derive everything by brute force.

#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "clarify/clarify.hpp"

namespace clarify::oracle {

using ParentMap = std::map<std::string, std::vector<std::string>>;

inline ParentMap parent_map(const std::vector<Concept>& concepts) {
  ParentMap m;
  for (const auto& c : concepts) m[c.id] = c.parents;
  return m;
}

/// Breadth-first search upward from `id`; node count of the shortest path
/// to `root`.
inline std::size_t depth(const ParentMap& parents, const std::string& root,
                         const std::string& id) {
  std::map<std::string, std::size_t> dist{{id, 1}};
  std::deque<std::string> queue{id};
  while (!queue.empty()) {
    const std::string cur = queue.front();
    queue.pop_front();
    if (cur == root) return dist[cur];
    for (const auto& p : parents.at(cur)) {
      if (!dist.count(p)) {
        dist[p] = dist[cur] + 1;
        queue.push_back(p);
      }
    }
  }
  return 0;
}

inline std::set<std::string> ancestors(const ParentMap& parents, const std::string& id) {
  std::set<std::string> seen;
  std::vector<std::string> stack{id};
  while (!stack.empty()) {
    const std::string cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    for (const auto& p : parents.at(cur)) stack.push_back(p);
  }
  return seen;
}

inline std::string lcs(const ParentMap& parents, const std::string& root, const std::string& a,
                       const std::string& b) {
  const auto xa = ancestors(parents, a);
  const auto xb = ancestors(parents, b);
  std::optional<std::string> best;
  std::size_t best_depth = 0;
  for (const auto& c : xa) {  // std::set iterates in id order
    if (!xb.count(c)) continue;
    const std::size_t d = depth(parents, root, c);
    if (!best || d > best_depth) {
      best = c;
      best_depth = d;
    }
  }
  return *best;
}

inline double wu_palmer(const ParentMap& parents, const std::string& root, const std::string& a,
                        const std::string& b) {
  const double l = static_cast<double>(depth(parents, root, lcs(parents, root, a, b)));
  const double s =
      2.0 * l / static_cast<double>(depth(parents, root, a) + depth(parents, root, b));
  return std::min(s, 1.0);
}

/// Three-colour depth-first search over every node.
inline bool has_cycle(const ParentMap& parents) {
  std::map<std::string, int> colour;  // 0 white, 1 grey, 2 black
  std::function<bool(const std::string&)> visit = [&](const std::string& n) {
    colour[n] = 1;
    auto it = parents.find(n);
    if (it != parents.end()) {
      for (const auto& p : it->second) {
        if (!parents.count(p)) continue;
        if (colour[p] == 1) return true;
        if (colour[p] == 0 && visit(p)) return true;
      }
    }
    colour[n] = 2;
    return false;
  };
  for (const auto& [id, _] : parents) {
    if (colour[id] == 0 && visit(id)) return true;
  }
  return false;
}

/// Weighted mean recomputed from scratch over the sorted union of names.
inline double weighted_similarity(const Case& a, const Case& b, const SimilarityConfig& config,
                                  const Ontology& ont) {
  const ParentMap parents = parent_map(ont.concepts());
  std::set<std::string> names;
  for (const auto& [n, _] : a.features) names.insert(n);
  for (const auto& [n, _] : b.features) names.insert(n);
  double num = 0.0;
  double den = 0.0;
  for (const auto& n : names) {
    const auto w = config.weights.count(n) ? config.weights.at(n) : config.default_weight;
    const bool in_a = a.features.count(n) != 0;
    const bool in_b = b.features.count(n) != 0;
    if (!(in_a && in_b)) {
      if (config.missing_policy == MissingPolicy::kPenalize) den += w;
      continue;
    }
    const auto& x = a.features.find(n)->second;
    const auto& y = b.features.find(n)->second;
    double s = 0.0;
    if (const auto* nx = std::get_if<Numeric>(&x)) {
      const auto& ny = std::get<Numeric>(y);
      s = 1.0 - std::fabs(nx->value - ny.value) / (nx->hi - nx->lo);
    } else if (const auto* sx = std::get_if<Symbolic>(&x)) {
      s = wu_palmer(parents, ont.root(), sx->concept_id, std::get<Symbolic>(y).concept_id);
    } else if (const auto* fx = std::get_if<Flag>(&x)) {
      s = fx->value == std::get<Flag>(y).value ? 1.0 : 0.0;
    } else {
      s = std::get<Text>(x).value == std::get<Text>(y).value ? 1.0 : 0.0;
    }
    num += w * s;
    den += w;
  }
  return num / den;
}

/// Literal scan with a strict `>` over entries pre-sorted by case_id, which
/// makes first-wins coincide with the smallest-id tie-break.
inline std::string argmax_case_id(const Case& query, const CaseBase& base,
                                  const SimilarityConfig& config, const Ontology& ont) {
  std::vector<const CaseEntry*> order;
  for (const auto& e : base.entries()) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const CaseEntry* x, const CaseEntry* y) {
    return x->problem.case_id < y->problem.case_id;
  });
  std::string most_similar;
  double highest = -1.0;
  for (const CaseEntry* e : order) {
    const double s = compute_similarity(query, e->problem, config, ont).total;
    if (s > highest) {
      highest = s;
      most_similar = e->problem.case_id;
    }
  }
  return most_similar;
}

/// Full sort of every entry by (score desc, id asc).
inline std::vector<std::pair<std::string, double>> ranking(const Case& query,
                                                           const CaseBase& base,
                                                           const SimilarityConfig& config,
                                                           const Ontology& ont) {
  std::vector<std::pair<std::string, double>> all;
  for (const auto& e : base.entries()) {
    all.emplace_back(e.problem.case_id, compute_similarity(query, e.problem, config, ont).total);
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });
  return all;
}

/// Generate Explanation, transliterated: look each concept's definition up,
/// append "concept: definition", then join the components with spaces.
inline std::string generate_explanation_literal(const Solution& case_solution,
                                                const std::vector<Concept>& domain_ontology) {
  std::vector<std::string> explanation_components;
  for (const auto& concept_name : case_solution.concepts_involved) {
    std::string concept_definition;
    for (const auto& c : domain_ontology) {
      if (c.id == concept_name) concept_definition = c.definition;
    }
    explanation_components.push_back(concept_name + ": " + concept_definition);
  }
  if (explanation_components.empty()) return "";
  return std::accumulate(
      std::next(explanation_components.begin()), explanation_components.end(),
      explanation_components.front(),
      [](const std::string& acc, const std::string& part) { return acc + " " + part; });
}

/// The three stages invoked by hand.
struct ManualDecision {
  RetrievalResult retrieved;
  AdaptationRecord adaptation;
  Explanation explanation;
};

inline ManualDecision manual_pipeline(const Case& query, const CaseBase& base,
                                      const Ontology& ont, const EngineConfig& config) {
  ManualDecision m;
  m.retrieved = retrieve_similar_case(query, base, config.similarity, ont);
  m.adaptation = adapt_solution(query, m.retrieved, ont, config.adaptation_strategy);
  m.explanation = build_explanation(m.retrieved, m.adaptation, ont, config.template_id);
  return m;
}

}  // namespace clarify::oracle
