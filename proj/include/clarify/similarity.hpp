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
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "clarify/casebase.hpp"
#include "clarify/error.hpp"
#include "clarify/ontology.hpp"

namespace clarify {

enum class MissingPolicy {
  kPenalize,  // local similarity 0, weight still counts
  kIgnore,    // feature dropped from the aggregate
};

inline std::string_view to_string(MissingPolicy p) {
  return p == MissingPolicy::kPenalize ? "penalize" : "ignore";
}

struct SimilarityConfig {
  std::map<std::string, double, std::less<>> weights;
  MissingPolicy missing_policy = MissingPolicy::kPenalize;
  double default_weight = 1.0;

  double weight_of(std::string_view feature) const {
    auto it = weights.find(feature);
    return it == weights.end() ? default_weight : it->second;
  }

  friend bool operator==(const SimilarityConfig&, const SimilarityConfig&) = default;
};

struct FeatureScore {
  std::string feature;
  double local_similarity = 0.0;
  double weight = 0.0;
  bool included = false;

  friend bool operator==(const FeatureScore&, const FeatureScore&) = default;
};

struct SimilarityBreakdown {
  std::vector<FeatureScore> per_feature;  // lexicographic by feature name
  double total = 0.0;

  friend bool operator==(const SimilarityBreakdown&, const SimilarityBreakdown&) = default;
};

/// Typed local similarity in [0, 1].
inline double local_similarity(const FeatureValue& a, const FeatureValue& b,
                               const Ontology& ont,
                               std::string_view feature = {}) {
  if (a.index() != b.index()) {
    throw Error(ErrorCode::kTypeMismatch,
                "feature \"" + std::string(feature) + "\" compares " +
                    std::string(type_name(a)) + " with " + std::string(type_name(b)),
                Json{{"feature", std::string(feature)}});
  }
  if (const auto* x = std::get_if<Numeric>(&a)) {
    const auto& y = std::get<Numeric>(b);
    if (x->lo != y.lo || x->hi != y.hi) {
      throw Error(ErrorCode::kRangeMismatch,
                  "feature \"" + std::string(feature) + "\" has differing numeric ranges",
                  Json{{"feature", std::string(feature)}});
    }
    const double s = 1.0 - std::abs(x->value - y.value) / (x->hi - x->lo);
    return std::clamp(s, 0.0, 1.0);
  }
  if (const auto* x = std::get_if<Symbolic>(&a)) {
    return ont.taxonomic_similarity(x->concept_id, std::get<Symbolic>(b).concept_id);
  }
  if (const auto* x = std::get_if<Flag>(&a)) {
    return x->value == std::get<Flag>(b).value ? 1.0 : 0.0;
  }
  return std::get<Text>(a).value == std::get<Text>(b).value ? 1.0 : 0.0;
}

/// Normalized weighted mean of local similarities over the union of feature
/// names, visited in lexicographic order.
inline SimilarityBreakdown compute_similarity(const Case& a, const Case& b,
                                              const SimilarityConfig& config,
                                              const Ontology& ont) {
  SimilarityBreakdown out;
  double numerator = 0.0;
  double denominator = 0.0;

  auto ia = a.features.begin();
  auto ib = b.features.begin();
  while (ia != a.features.end() || ib != b.features.end()) {
    FeatureScore score;
    if (ib == b.features.end() || (ia != a.features.end() && ia->first < ib->first)) {
      score.feature = ia->first;
      ++ia;
    } else if (ia == a.features.end() || ib->first < ia->first) {
      score.feature = ib->first;
      ++ib;
    } else {
      score.feature = ia->first;
      score.local_similarity = local_similarity(ia->second, ib->second, ont, ia->first);
      score.included = true;
      ++ia;
      ++ib;
    }
    score.weight = config.weight_of(score.feature);
    if (!score.included && config.missing_policy == MissingPolicy::kPenalize) {
      score.included = true;
    }
    if (score.included) {
      numerator += score.weight * score.local_similarity;
      denominator += score.weight;
    }
    out.per_feature.push_back(std::move(score));
  }

  if (!(denominator > 0.0)) {
    throw Error(ErrorCode::kNoComparableFeatures,
                "no comparable features between \"" + a.case_id + "\" and \"" +
                    b.case_id + "\"",
                Json{{"cases", {a.case_id, b.case_id}}});
  }
  out.total = std::min(1.0, numerator / denominator);
  return out;
}

inline Json breakdown_to_json(const SimilarityBreakdown& b) {
  Json rows = Json::array();
  for (const FeatureScore& f : b.per_feature) {
    rows.push_back(Json{{"feature", f.feature},
                        {"local_similarity", f.local_similarity},
                        {"weight", f.weight},
                        {"included", f.included}});
  }
  return Json{{"per_feature", rows}, {"total", b.total}};
}

inline SimilarityBreakdown breakdown_from_json(const Json& j, const std::string& field) {
  using namespace json_io;
  check_keys(j, field, {"per_feature", "total"});
  SimilarityBreakdown b;
  const Json& rows = require_array(require_key(j, field, "per_feature"), child(field, "per_feature"));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string f = index(child(field, "per_feature"), i);
    check_keys(rows[i], f, {"feature", "local_similarity", "weight", "included"});
    b.per_feature.push_back(FeatureScore{
        get_string(require_key(rows[i], f, "feature"), child(f, "feature")),
        get_number(require_key(rows[i], f, "local_similarity"), child(f, "local_similarity")),
        get_number(require_key(rows[i], f, "weight"), child(f, "weight")),
        get_bool(require_key(rows[i], f, "included"), child(f, "included"))});
  }
  b.total = get_number(require_key(j, field, "total"), child(field, "total"));
  return b;
}

inline Json similarity_config_to_json(const SimilarityConfig& c) {
  Json weights = Json::object();
  for (const auto& [k, w] : c.weights) weights[k] = w;
  return Json{{"weights", weights},
              {"default_weight", c.default_weight},
              {"missing_policy", to_string(c.missing_policy)}};
}

inline SimilarityConfig similarity_config_from_json(const Json& j,
                                                    const std::string& field) {
  using namespace json_io;
  check_keys(j, field, {"weights", "default_weight", "missing_policy"});
  SimilarityConfig c;
  auto check_weight = [&](double w, const std::string& f) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kValidation, f + ": weight must be a finite non-negative number",
                  Json{{"field", f}});
    }
    return w;
  };
  if (auto it = j.find("weights"); it != j.end()) {
    require_object(*it, child(field, "weights"));
    for (const auto& [k, v] : it->items()) {
      const std::string f = child(child(field, "weights"), k);
      c.weights.emplace(k, check_weight(get_number(v, f), f));
    }
  }
  if (auto it = j.find("default_weight"); it != j.end()) {
    const std::string f = child(field, "default_weight");
    c.default_weight = check_weight(get_number(*it, f), f);
  }
  if (auto it = j.find("missing_policy"); it != j.end()) {
    const std::string f = child(field, "missing_policy");
    const std::string p = get_string(*it, f);
    if (p == "penalize") {
      c.missing_policy = MissingPolicy::kPenalize;
    } else if (p == "ignore") {
      c.missing_policy = MissingPolicy::kIgnore;
    } else {
      throw Error(ErrorCode::kValidation, f + ": unknown missing_policy \"" + p + "\"",
                  Json{{"field", f}});
    }
  }
  return c;
}

}  // namespace clarify
