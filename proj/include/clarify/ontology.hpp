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
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clarify/error.hpp"
#include "clarify/json_io.hpp"

namespace clarify {

using ConceptId = std::string;

/// Name given to the root synthesized when a document has several parentless
/// concepts.
inline constexpr std::string_view kVirtualRootId = "THING";
inline constexpr std::string_view kVirtualRootDefinition = "top concept";

inline bool is_valid_concept_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
  });
}

struct Concept {
  ConceptId id;
  std::string label;
  std::string definition;
  std::vector<ConceptId> parents;  // sorted, unique

  friend bool operator==(const Concept&, const Concept&) = default;
};

struct Relation {
  std::string kind;
  ConceptId source;
  ConceptId target;

  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Rooted is-a DAG with definitions and auxiliary relations.
///
/// Instances are immutable once built; all derived tables (depths, reflexive
/// ancestor sets) are computed up front so queries are read-only and safe to
/// share between threads.
class Ontology {
 public:
  /// Validates and indexes a concept set. Throws Error(kValidation) on
  /// duplicate ids, malformed ids, empty definitions, dangling references,
  /// cycles, or a root that does not subsume every concept.
  static Ontology build(std::vector<Concept> concepts,
                        std::vector<Relation> relations,
                        std::optional<ConceptId> root = std::nullopt);

  const ConceptId& root() const { return concepts_[root_].id; }
  const std::vector<Concept>& concepts() const { return concepts_; }
  const std::vector<Relation>& relations() const { return relations_; }
  std::size_t size() const { return concepts_.size(); }

  bool contains(std::string_view id) const { return index_.count(id) != 0; }

  const Concept& concept_at(std::string_view id) const {
    return concepts_[index_of(id)];
  }

  const std::string& definition(std::string_view id) const {
    return concept_at(id).definition;
  }

  /// Nodes on the shortest upward path to the root, inclusive; root is 1.
  std::size_t depth(std::string_view id) const { return depth_[index_of(id)]; }

  /// Deepest common ancestor under reflexive-transitive is-a. Ties go to the
  /// lexicographically smallest id.
  const ConceptId& least_common_subsumer(std::string_view a,
                                         std::string_view b) const {
    return concepts_[lcs_index(index_of(a), index_of(b))].id;
  }

  /// Wu-Palmer: 2 * depth(lcs) / (depth(a) + depth(b)), capped at 1.
  ///
  /// The cap only bites in DAGs where a concept has a shortcut edge toward
  /// the root, making its shortest-path depth smaller than that of a deeper
  /// common ancestor. In a tree depth(lcs) <= min(depth(a), depth(b)) holds
  /// and the ratio is already in (0, 1].
  double taxonomic_similarity(std::string_view a, std::string_view b) const {
    const std::size_t ia = index_of(a);
    const std::size_t ib = index_of(b);
    const std::size_t l = lcs_index(ia, ib);
    const double s = 2.0 * static_cast<double>(depth_[l]) /
                     static_cast<double>(depth_[ia] + depth_[ib]);
    return s < 1.0 ? s : 1.0;
  }

  /// Reflexive ancestor set, sorted by id.
  std::vector<ConceptId> ancestors(std::string_view id) const {
    std::vector<ConceptId> out;
    for (std::size_t i : ancestors_[index_of(id)]) out.push_back(concepts_[i].id);
    return out;
  }

  friend bool operator==(const Ontology& a, const Ontology& b) {
    return a.root_ == b.root_ && a.concepts_ == b.concepts_ &&
           a.relations_ == b.relations_;
  }

 private:
  Ontology() = default;

  std::size_t index_of(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
      throw Error(ErrorCode::kUnknownConcept,
                  "unknown concept \"" + std::string(id) + "\"",
                  Json{{"concept", std::string(id)}});
    }
    return it->second;
  }

  std::size_t lcs_index(std::size_t a, std::size_t b) const {
    const auto& xs = ancestors_[a];
    const auto& ys = ancestors_[b];
    std::size_t best = root_;
    auto x = xs.begin();
    auto y = ys.begin();
    // Both lists are sorted by index, which is id order, so the first hit at
    // a given depth is already the tie-break winner.
    while (x != xs.end() && y != ys.end()) {
      if (*x < *y) {
        ++x;
      } else if (*y < *x) {
        ++y;
      } else {
        if (depth_[*x] > depth_[best]) best = *x;
        ++x;
        ++y;
      }
    }
    return best;
  }

  std::vector<Concept> concepts_;  // sorted by id
  std::vector<Relation> relations_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::size_t root_ = 0;
  std::vector<std::size_t> depth_;
  std::vector<std::vector<std::size_t>> ancestors_;
};

namespace detail {

[[noreturn]] inline void fail_validation(const std::string& message,
                                         Json detail) {
  throw Error(ErrorCode::kValidation, message, std::move(detail));
}

}  // namespace detail

inline Ontology Ontology::build(std::vector<Concept> concepts,
                                std::vector<Relation> relations,
                                std::optional<ConceptId> root) {
  using detail::fail_validation;
  if (concepts.empty()) {
    fail_validation("ontology has no concepts", Json{{"reason", "empty"}});
  }
  std::sort(concepts.begin(), concepts.end(),
            [](const Concept& a, const Concept& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    Concept& c = concepts[i];
    if (!is_valid_concept_id(c.id)) {
      fail_validation("invalid concept id \"" + c.id + "\"",
                      Json{{"reason", "invalid_id"}, {"concept", c.id}});
    }
    if (i > 0 && concepts[i - 1].id == c.id) {
      fail_validation("duplicate concept id \"" + c.id + "\"",
                      Json{{"reason", "duplicate_id"}, {"concept", c.id}});
    }
    if (c.definition.empty()) {
      fail_validation("concept \"" + c.id + "\" has an empty definition",
                      Json{{"reason", "empty_definition"}, {"concept", c.id}});
    }
    std::sort(c.parents.begin(), c.parents.end());
    c.parents.erase(std::unique(c.parents.begin(), c.parents.end()),
                    c.parents.end());
  }

  auto find = [&](std::string_view id) -> std::optional<std::size_t> {
    auto it = std::lower_bound(
        concepts.begin(), concepts.end(), id,
        [](const Concept& c, std::string_view v) { return c.id < v; });
    if (it == concepts.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - concepts.begin());
  };

  for (const Concept& c : concepts) {
    for (const ConceptId& p : c.parents) {
      if (!find(p)) {
        fail_validation("concept \"" + c.id + "\" has dangling parent \"" + p + "\"",
                        Json{{"reason", "dangling_parent"},
                             {"concept", c.id},
                             {"parent", p}});
      }
    }
  }

  // Several parentless concepts: hang them all under a virtual root.
  std::vector<std::size_t> parentless;
  for (std::size_t i = 0; i < concepts.size(); ++i) {
    if (concepts[i].parents.empty()) parentless.push_back(i);
  }
  if (!root && parentless.size() > 1) {
    const ConceptId top(kVirtualRootId);
    auto existing = find(top);
    if (existing && !concepts[*existing].parents.empty()) {
      fail_validation("cannot synthesize root: \"" + top + "\" already has parents",
                      Json{{"reason", "virtual_root_conflict"}});
    }
    for (std::size_t i : parentless) {
      if (concepts[i].id != top) concepts[i].parents = {top};
    }
    if (!existing) {
      concepts.push_back(Concept{top, top, std::string(kVirtualRootDefinition), {}});
      std::sort(concepts.begin(), concepts.end(),
                [](const Concept& a, const Concept& b) { return a.id < b.id; });
    }
    root = top;
  }

  Ontology ont;
  ont.concepts_ = std::move(concepts);
  const std::size_t n = ont.concepts_.size();
  for (std::size_t i = 0; i < n; ++i) ont.index_.emplace(ont.concepts_[i].id, i);

  std::vector<std::vector<std::size_t>> parents(n);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const ConceptId& p : ont.concepts_[i].parents) {
      const std::size_t pi = ont.index_.find(p)->second;
      parents[i].push_back(pi);
      children[pi].push_back(i);
    }
  }

  // Kahn's algorithm decides acyclicity; leftovers all sit on or above a cycle.
  std::vector<std::size_t> pending(n);
  std::vector<std::size_t> topo;
  topo.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = parents[i].size();
    if (pending[i] == 0) topo.push_back(i);
  }
  for (std::size_t head = 0; head < topo.size(); ++head) {
    for (std::size_t c : children[topo[head]]) {
      if (--pending[c] == 0) topo.push_back(c);
    }
  }
  if (topo.size() != n) {
    // Every unsorted node keeps at least one unsorted parent, so walking to
    // the smallest such parent must revisit a node.
    std::size_t start = 0;
    while (pending[start] == 0) ++start;
    std::vector<std::size_t> path;
    std::vector<std::size_t> seen_at(n, n);
    std::size_t cur = start;
    while (seen_at[cur] == n) {
      seen_at[cur] = path.size();
      path.push_back(cur);
      for (std::size_t p : parents[cur]) {
        if (pending[p] != 0) {
          cur = p;
          break;
        }
      }
    }
    Json cycle = Json::array();
    std::string text;
    for (std::size_t k = seen_at[cur]; k < path.size(); ++k) {
      const ConceptId& id = ont.concepts_[path[k]].id;
      cycle.push_back(id);
      text += (text.empty() ? "" : ", ") + id;
    }
    fail_validation("cycle detected: [" + text + "]",
                    Json{{"reason", "cycle"}, {"cycle", cycle}});
  }

  if (root) {
    auto it = ont.index_.find(*root);
    if (it == ont.index_.end()) {
      fail_validation("root \"" + *root + "\" is not a concept",
                      Json{{"reason", "unknown_root"}, {"concept", *root}});
    }
    ont.root_ = it->second;
    if (!parents[ont.root_].empty()) {
      fail_validation("root \"" + *root + "\" has parents",
                      Json{{"reason", "root_has_parents"}, {"concept", *root}});
    }
  } else {
    ont.root_ = topo.front();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i != ont.root_ && parents[i].empty()) {
      fail_validation("concept \"" + ont.concepts_[i].id + "\" is not subsumed by root \"" +
                          ont.concepts_[ont.root_].id + "\"",
                      Json{{"reason", "multiple_roots"},
                           {"concept", ont.concepts_[i].id}});
    }
  }

  for (const Relation& r : relations) {
    if (r.kind.empty()) {
      fail_validation("relation with empty kind", Json{{"reason", "relation_kind"}});
    }
    for (const ConceptId* end : {&r.source, &r.target}) {
      if (!ont.contains(*end)) {
        fail_validation("relation \"" + r.kind + "\" references unknown concept \"" + *end + "\"",
                        Json{{"reason", "dangling_relation"}, {"concept", *end}});
      }
    }
    if (r.source == r.target) {
      fail_validation("relation \"" + r.kind + "\" links \"" + r.source + "\" to itself",
                      Json{{"reason", "self_relation"}, {"concept", r.source}});
    }
  }
  ont.relations_ = std::move(relations);

  // Shortest downward path from the root equals the shortest upward path.
  ont.depth_.assign(n, 0);
  ont.depth_[ont.root_] = 1;
  std::deque<std::size_t> queue{ont.root_};
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (std::size_t c : children[cur]) {
      if (ont.depth_[c] == 0) {
        ont.depth_[c] = ont.depth_[cur] + 1;
        queue.push_back(c);
      }
    }
  }

  ont.ancestors_.assign(n, {});
  for (std::size_t i : topo) {
    auto& acc = ont.ancestors_[i];
    acc.push_back(i);
    for (std::size_t p : parents[i]) {
      acc.insert(acc.end(), ont.ancestors_[p].begin(), ont.ancestors_[p].end());
    }
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
  }
  return ont;
}

// ---------------------------------------------------------------------------
// Free-function surface

inline const std::string& get_concept_definition(const Ontology& ont,
                                                 std::string_view concept_id) {
  return ont.definition(concept_id);
}

inline std::size_t depth(const Ontology& ont, std::string_view concept_id) {
  return ont.depth(concept_id);
}

inline const ConceptId& least_common_subsumer(const Ontology& ont,
                                              std::string_view a,
                                              std::string_view b) {
  return ont.least_common_subsumer(a, b);
}

inline double taxonomic_similarity(const Ontology& ont, std::string_view a,
                                   std::string_view b) {
  return ont.taxonomic_similarity(a, b);
}

// ---------------------------------------------------------------------------
// Serialization

inline Ontology ontology_from_json(const Json& doc) {
  using namespace json_io;
  check_keys(doc, "ontology", {"root", "concepts", "relations"});
  std::optional<ConceptId> root;
  if (auto it = doc.find("root"); it != doc.end()) root = get_string(*it, "root");

  std::vector<Concept> concepts;
  const Json& cs = require_array(require_key(doc, "", "concepts"), "concepts");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string field = index("concepts", i);
    check_keys(cs[i], field, {"id", "label", "definition", "parents"});
    Concept c;
    c.id = get_string(require_key(cs[i], field, "id"), child(field, "id"));
    if (auto it = cs[i].find("label"); it != cs[i].end()) {
      c.label = get_string(*it, child(field, "label"));
    } else {
      c.label = c.id;
    }
    c.definition =
        get_string(require_key(cs[i], field, "definition"), child(field, "definition"));
    if (auto it = cs[i].find("parents"); it != cs[i].end()) {
      c.parents = get_string_array(*it, child(field, "parents"));
    }
    concepts.push_back(std::move(c));
  }

  std::vector<Relation> relations;
  if (auto it = doc.find("relations"); it != doc.end()) {
    require_array(*it, "relations");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string field = index("relations", i);
      const Json& r = (*it)[i];
      check_keys(r, field, {"kind", "source", "target"});
      relations.push_back(Relation{
          get_string(require_key(r, field, "kind"), child(field, "kind")),
          get_string(require_key(r, field, "source"), child(field, "source")),
          get_string(require_key(r, field, "target"), child(field, "target"))});
    }
  }
  return Ontology::build(std::move(concepts), std::move(relations), std::move(root));
}

/// Parses and validates an ontology document.
inline Ontology load_ontology(std::string_view document) {
  return ontology_from_json(json_io::parse_document(document, "ontology"));
}

inline Json ontology_to_json(const Ontology& ont) {
  Json concepts = Json::array();
  for (const Concept& c : ont.concepts()) {
    concepts.push_back(Json{{"id", c.id},
                            {"label", c.label},
                            {"definition", c.definition},
                            {"parents", c.parents}});
  }
  Json relations = Json::array();
  for (const Relation& r : ont.relations()) {
    relations.push_back(
        Json{{"kind", r.kind}, {"source", r.source}, {"target", r.target}});
  }
  return Json{{"root", ont.root()}, {"concepts", concepts}, {"relations", relations}};
}

inline std::string save_ontology(const Ontology& ont) {
  return ontology_to_json(ont).dump(2) + "\n";
}

}  // namespace clarify
