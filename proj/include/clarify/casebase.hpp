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

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "clarify/error.hpp"
#include "clarify/json_io.hpp"
#include "clarify/ontology.hpp"

namespace clarify {

struct Numeric {
  double value = 0.0;
  double lo = 0.0;
  double hi = 1.0;

  friend bool operator==(const Numeric&, const Numeric&) = default;
};

struct Symbolic {
  ConceptId concept_id;

  friend bool operator==(const Symbolic&, const Symbolic&) = default;
};

struct Flag {
  bool value = false;

  friend bool operator==(const Flag&, const Flag&) = default;
};

struct Text {
  std::string value;

  friend bool operator==(const Text&, const Text&) = default;
};

using FeatureValue = std::variant<Numeric, Symbolic, Flag, Text>;
using FeatureMap = std::map<std::string, FeatureValue, std::less<>>;

inline std::string_view type_name(const FeatureValue& v) {
  static constexpr std::string_view kNames[] = {"numeric", "symbolic", "flag", "text"};
  return kNames[v.index()];
}

struct Case {
  std::string case_id;
  FeatureMap features;

  friend bool operator==(const Case&, const Case&) = default;
};

using Scalar = std::variant<bool, std::int64_t, double, std::string>;

struct Solution {
  std::string action;
  std::vector<ConceptId> concepts_involved;
  std::map<std::string, Scalar> parameters;

  friend bool operator==(const Solution&, const Solution&) = default;
};

struct CaseEntry {
  Case problem;
  Solution solution;

  friend bool operator==(const CaseEntry&, const CaseEntry&) = default;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  kEmptyCaseId,
  kEmptyFeatures,
  kEmptyFeatureName,
  kInvalidRange,
  kRangeViolation,
  kUnknownConcept,
  kRangeMismatch,
};

inline std::string_view to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::kEmptyCaseId: return "EmptyCaseId";
    case ViolationKind::kEmptyFeatures: return "EmptyFeatures";
    case ViolationKind::kEmptyFeatureName: return "EmptyFeatureName";
    case ViolationKind::kInvalidRange: return "InvalidRange";
    case ViolationKind::kRangeViolation: return "RangeViolation";
    case ViolationKind::kUnknownConcept: return "UnknownConcept";
    case ViolationKind::kRangeMismatch: return "RangeMismatch";
  }
  return "Unknown";
}

struct Violation {
  ViolationKind kind;
  std::string case_id;
  std::string feature;  // feature name, or a solution field locator
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline Json violation_to_json(const Violation& v) {
  return Json{{"kind", to_string(v.kind)},
              {"case_id", v.case_id},
              {"feature", v.feature},
              {"message", v.message}};
}

inline Json violations_to_json(const std::vector<Violation>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(violation_to_json(v));
  return out;
}

namespace detail {

// Shortest round-trip text; integral values print without a fraction.
inline std::string num(double x) {
  if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 1e15) {
    return std::to_string(static_cast<long long>(x));
  }
  return Json(x).dump();
}

}  // namespace detail

/// Collects every violation in `c`, feature-name order after case-level ones.
inline std::vector<Violation> validate_case(const Case& c, const Ontology& ont) {
  std::vector<Violation> out;
  if (c.case_id.empty()) {
    out.push_back({ViolationKind::kEmptyCaseId, c.case_id, "", "case_id is empty"});
  }
  if (c.features.empty()) {
    out.push_back({ViolationKind::kEmptyFeatures, c.case_id, "", "case has no features"});
  }
  for (const auto& [name, value] : c.features) {
    if (name.empty()) {
      out.push_back({ViolationKind::kEmptyFeatureName, c.case_id, name,
                     "feature name is empty"});
    }
    if (const auto* n = std::get_if<Numeric>(&value)) {
      const std::string range = "[" + detail::num(n->lo) + ", " + detail::num(n->hi) + "]";
      if (!std::isfinite(n->lo) || !std::isfinite(n->hi) || !(n->lo < n->hi)) {
        out.push_back({ViolationKind::kInvalidRange, c.case_id, name,
                       "feature \"" + name + "\" has invalid range " + range});
      } else if (!std::isfinite(n->value) || n->value < n->lo || n->value > n->hi) {
        out.push_back({ViolationKind::kRangeViolation, c.case_id, name,
                       "feature \"" + name + "\" value " + detail::num(n->value) +
                           " outside range " + range});
      }
    } else if (const auto* s = std::get_if<Symbolic>(&value)) {
      if (!ont.contains(s->concept_id)) {
        out.push_back({ViolationKind::kUnknownConcept, c.case_id, name,
                       "feature \"" + name + "\" references unknown concept \"" +
                           s->concept_id + "\""});
      }
    }
  }
  return out;
}

inline std::vector<Violation> validate_solution(const Solution& s,
                                                const std::string& case_id,
                                                const Ontology& ont) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < s.concepts_involved.size(); ++i) {
    const ConceptId& id = s.concepts_involved[i];
    if (!ont.contains(id)) {
      out.push_back({ViolationKind::kUnknownConcept, case_id,
                     "solution.concepts_involved[" + std::to_string(i) + "]",
                     "solution references unknown concept \"" + id + "\""});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CaseBase

struct FeatureRange {
  double lo;
  double hi;

  friend bool operator==(const FeatureRange&, const FeatureRange&) = default;
};

/// Ordered (case, solution) list. Grows only through add_case; every
/// successful add yields a new value with source_version bumped by one, so
/// holders of an older value keep a consistent snapshot.
class CaseBase {
 public:
  CaseBase() = default;

  const std::vector<CaseEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::uint64_t source_version() const { return version_; }

  const CaseEntry* find(std::string_view case_id) const {
    auto it = index_.find(case_id);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  /// Declared range shared by every numeric occurrence of `feature`.
  std::optional<FeatureRange> range_of(std::string_view feature) const {
    auto it = ranges_.find(feature);
    if (it == ranges_.end()) return std::nullopt;
    return it->second;
  }

  /// Numeric features whose declared range disagrees with this base.
  std::vector<Violation> range_conflicts(const Case& c) const {
    std::vector<Violation> out;
    for (const auto& [name, value] : c.features) {
      const auto* n = std::get_if<Numeric>(&value);
      if (!n) continue;
      auto r = range_of(name);
      if (r && !(*r == FeatureRange{n->lo, n->hi})) {
        out.push_back({ViolationKind::kRangeMismatch, c.case_id, name,
                       "feature \"" + name + "\" range [" + detail::num(n->lo) + ", " +
                           detail::num(n->hi) + "] disagrees with case base range [" +
                           detail::num(r->lo) + ", " + detail::num(r->hi) + "]"});
      }
    }
    return out;
  }

  /// Structural equality over entries; source_version is bookkeeping.
  friend bool operator==(const CaseBase& a, const CaseBase& b) {
    return a.entries_ == b.entries_;
  }

 private:
  friend CaseBase add_case(const CaseBase&, Case, Solution, const Ontology&);
  friend CaseBase build_case_base(std::vector<CaseEntry>, const Ontology&);

  // Returns the violations that block appending; empty means appended.
  std::vector<Violation> try_append(CaseEntry entry, const Ontology& ont) {
    std::vector<Violation> vs = validate_case(entry.problem, ont);
    auto sol = validate_solution(entry.solution, entry.problem.case_id, ont);
    vs.insert(vs.end(), sol.begin(), sol.end());
    auto conflicts = range_conflicts(entry.problem);
    vs.insert(vs.end(), conflicts.begin(), conflicts.end());
    if (!vs.empty()) return vs;
    for (const auto& [name, value] : entry.problem.features) {
      if (const auto* n = std::get_if<Numeric>(&value)) {
        ranges_.try_emplace(name, FeatureRange{n->lo, n->hi});
      }
    }
    index_.emplace(entry.problem.case_id, entries_.size());
    entries_.push_back(std::move(entry));
    return {};
  }

  std::vector<CaseEntry> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, FeatureRange, std::less<>> ranges_;
  std::uint64_t version_ = 0;
};

namespace detail {

[[noreturn]] inline void fail_entry(const std::string& case_id,
                                    const std::vector<Violation>& vs) {
  std::string msg = "case \"" + case_id + "\" is invalid: " + vs.front().message;
  if (vs.size() > 1) msg += " (+" + std::to_string(vs.size() - 1) + " more)";
  throw Error(ErrorCode::kValidation, msg,
              Json{{"case_id", case_id}, {"violations", violations_to_json(vs)}});
}

}  // namespace detail

/// Appends one entry. The input base is never modified.
inline CaseBase add_case(const CaseBase& base, Case c, Solution s,
                         const Ontology& ont) {
  if (base.find(c.case_id) != nullptr) {
    throw Error(ErrorCode::kDuplicateCaseId,
                "duplicate case_id \"" + c.case_id + "\"",
                Json{{"case_id", c.case_id}});
  }
  CaseBase next = base;
  const std::string id = c.case_id;
  auto vs = next.try_append(CaseEntry{std::move(c), std::move(s)}, ont);
  if (!vs.empty()) detail::fail_entry(id, vs);
  ++next.version_;
  return next;
}

/// Builds a base from entries in order; the first offending entry aborts.
inline CaseBase build_case_base(std::vector<CaseEntry> entries,
                                const Ontology& ont) {
  CaseBase base;
  for (CaseEntry& e : entries) {
    if (base.find(e.problem.case_id) != nullptr) {
      throw Error(ErrorCode::kValidation,
                  "duplicate case_id \"" + e.problem.case_id + "\"",
                  Json{{"case_id", e.problem.case_id},
                       {"violations", Json::array()}});
    }
    const std::string id = e.problem.case_id;
    auto vs = base.try_append(std::move(e), ont);
    if (!vs.empty()) detail::fail_entry(id, vs);
  }
  return base;
}

// ---------------------------------------------------------------------------
// Serialization

inline Json feature_to_json(const FeatureValue& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Numeric>) {
          return Json{{"type", "numeric"}, {"value", x.value}, {"range", {x.lo, x.hi}}};
        } else if constexpr (std::is_same_v<T, Symbolic>) {
          return Json{{"type", "symbolic"}, {"concept", x.concept_id}};
        } else if constexpr (std::is_same_v<T, Flag>) {
          return Json{{"type", "flag"}, {"value", x.value}};
        } else {
          return Json{{"type", "text"}, {"value", x.value}};
        }
      },
      v);
}

inline FeatureValue feature_from_json(const Json& j, const std::string& field) {
  using namespace json_io;
  require_object(j, field);
  const std::string type =
      get_string(require_key(j, field, "type"), child(field, "type"));
  if (type == "numeric") {
    check_keys(j, field, {"type", "value", "range"});
    const Json& range = require_array(require_key(j, field, "range"), child(field, "range"));
    if (range.size() != 2) fail_field(child(field, "range"), "expected [lo, hi]");
    return Numeric{get_number(require_key(j, field, "value"), child(field, "value")),
                   get_number(range[0], child(field, "range") + "[0]"),
                   get_number(range[1], child(field, "range") + "[1]")};
  }
  if (type == "symbolic") {
    check_keys(j, field, {"type", "concept"});
    return Symbolic{get_string(require_key(j, field, "concept"), child(field, "concept"))};
  }
  if (type == "flag") {
    check_keys(j, field, {"type", "value"});
    return Flag{get_bool(require_key(j, field, "value"), child(field, "value"))};
  }
  if (type == "text") {
    check_keys(j, field, {"type", "value"});
    return Text{get_string(require_key(j, field, "value"), child(field, "value"))};
  }
  fail_field(child(field, "type"), "unknown feature type \"" + type + "\"");
}

inline Json features_to_json(const FeatureMap& features) {
  Json out = Json::object();
  for (const auto& [name, value] : features) out[name] = feature_to_json(value);
  return out;
}

inline FeatureMap features_from_json(const Json& j, const std::string& field) {
  json_io::require_object(j, field);
  FeatureMap out;
  for (const auto& [name, value] : j.items()) {
    out.emplace(name, feature_from_json(value, json_io::child(field, name)));
  }
  return out;
}

inline Json scalar_to_json(const Scalar& s) {
  return std::visit([](const auto& x) { return Json(x); }, s);
}

inline Scalar scalar_from_json(const Json& j, const std::string& field) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  json_io::fail_field(field, "expected a scalar");
}

inline Json solution_to_json(const Solution& s) {
  Json params = Json::object();
  for (const auto& [k, v] : s.parameters) params[k] = scalar_to_json(v);
  return Json{{"action", s.action},
              {"concepts_involved", s.concepts_involved},
              {"parameters", params}};
}

inline Solution solution_from_json(const Json& j, const std::string& field) {
  using namespace json_io;
  check_keys(j, field, {"action", "concepts_involved", "parameters"});
  Solution s;
  s.action = get_string(require_key(j, field, "action"), child(field, "action"));
  if (auto it = j.find("concepts_involved"); it != j.end()) {
    s.concepts_involved = get_string_array(*it, child(field, "concepts_involved"));
  }
  if (auto it = j.find("parameters"); it != j.end()) {
    require_object(*it, child(field, "parameters"));
    for (const auto& [k, v] : it->items()) {
      s.parameters.emplace(k, scalar_from_json(v, child(child(field, "parameters"), k)));
    }
  }
  return s;
}

inline Json case_to_json(const Case& c) {
  return Json{{"case_id", c.case_id}, {"features", features_to_json(c.features)}};
}

/// A missing `features` object reads as empty so validation reports it.
inline Case case_from_json(const Json& j, const std::string& field,
                           std::optional<std::string> default_id = std::nullopt) {
  using namespace json_io;
  check_keys(j, field, {"case_id", "features"});
  Case c;
  if (auto it = j.find("case_id"); it != j.end()) {
    c.case_id = get_string(*it, child(field, "case_id"));
  } else if (default_id) {
    c.case_id = *default_id;
  } else {
    fail_field(field, "missing key \"case_id\"");
  }
  if (auto it = j.find("features"); it != j.end()) {
    c.features = features_from_json(*it, child(field, "features"));
  }
  return c;
}

inline Json entry_to_json(const CaseEntry& e) {
  Json j = case_to_json(e.problem);
  j["solution"] = solution_to_json(e.solution);
  return j;
}

inline CaseEntry entry_from_json(const Json& j, const std::string& field) {
  using namespace json_io;
  check_keys(j, field, {"case_id", "features", "solution"});
  Json problem = Json::object();
  if (auto it = j.find("case_id"); it != j.end()) problem["case_id"] = *it;
  if (auto it = j.find("features"); it != j.end()) problem["features"] = *it;
  return CaseEntry{case_from_json(problem, field),
                   solution_from_json(require_key(j, field, "solution"),
                                      child(field, "solution"))};
}

/// Parses a case-base document without validating entries.
inline std::vector<CaseEntry> parse_case_base_document(std::string_view document) {
  using namespace json_io;
  const Json doc = parse_document(document, "case base");
  check_keys(doc, "case base", {"cases"});
  const Json& cases = require_array(require_key(doc, "", "cases"), "cases");
  std::vector<CaseEntry> entries;
  entries.reserve(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    entries.push_back(entry_from_json(cases[i], index("cases", i)));
  }
  return entries;
}

inline CaseBase load_case_base(std::string_view document, const Ontology& ont) {
  return build_case_base(parse_case_base_document(document), ont);
}

inline Json case_base_to_json(const CaseBase& base) {
  Json cases = Json::array();
  for (const CaseEntry& e : base.entries()) cases.push_back(entry_to_json(e));
  return Json{{"cases", cases}};
}

inline std::string save_case_base(const CaseBase& base) {
  return case_base_to_json(base).dump(2) + "\n";
}

}  // namespace clarify
