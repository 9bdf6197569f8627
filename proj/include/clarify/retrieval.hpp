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
#include <string>
#include <vector>

#include "clarify/casebase.hpp"
#include "clarify/error.hpp"
#include "clarify/similarity.hpp"

namespace clarify {

struct RetrievalResult {
  Case problem;
  Solution solution;
  double similarity = 0.0;  // == breakdown.total
  SimilarityBreakdown breakdown;

  friend bool operator==(const RetrievalResult&, const RetrievalResult&) = default;
};

namespace detail {

inline void require_non_empty(const CaseBase& base) {
  if (base.empty()) {
    throw Error(ErrorCode::kEmptyCaseBase, "case base is empty");
  }
}

inline SimilarityBreakdown score_entry(const Case& query, const CaseEntry& entry,
                                       const SimilarityConfig& config,
                                       const Ontology& ont) {
  try {
    return compute_similarity(query, entry.problem, config, ont);
  } catch (const Error& e) {
    Json detail = e.detail().is_object() ? e.detail() : Json::object();
    detail["case_id"] = entry.problem.case_id;
    throw Error(e.code(),
                std::string(e.what()) + " (stored case \"" + entry.problem.case_id + "\")",
                std::move(detail));
  }
}

// Strict weak order: higher similarity first, then smaller case_id.
inline bool ranks_before(double sa, const std::string& ida, double sb,
                         const std::string& idb) {
  if (sa != sb) return sa > sb;
  return ida < idb;
}

}  // namespace detail

/// Best match by exhaustive scan. Exact ties resolve to the smallest case_id,
/// so the answer does not depend on entry order.
inline RetrievalResult retrieve_similar_case(const Case& query, const CaseBase& base,
                                             const SimilarityConfig& config,
                                             const Ontology& ont) {
  detail::require_non_empty(base);
  const CaseEntry* best = nullptr;
  SimilarityBreakdown best_breakdown;
  for (const CaseEntry& entry : base.entries()) {
    SimilarityBreakdown b = detail::score_entry(query, entry, config, ont);
    if (best == nullptr || detail::ranks_before(b.total, entry.problem.case_id,
                                                best_breakdown.total,
                                                best->problem.case_id)) {
      best = &entry;
      best_breakdown = std::move(b);
    }
  }
  const double total = best_breakdown.total;
  return RetrievalResult{best->problem, best->solution, total, std::move(best_breakdown)};
}

/// The min(k, |base|) best entries by (similarity desc, case_id asc).
inline std::vector<RetrievalResult> retrieve_k(const Case& query, const CaseBase& base,
                                               std::size_t k,
                                               const SimilarityConfig& config,
                                               const Ontology& ont) {
  if (k == 0) {
    throw Error(ErrorCode::kValidation, "k must be at least 1", Json{{"field", "k"}});
  }
  detail::require_non_empty(base);
  std::vector<RetrievalResult> all;
  all.reserve(base.size());
  for (const CaseEntry& entry : base.entries()) {
    SimilarityBreakdown b = detail::score_entry(query, entry, config, ont);
    const double total = b.total;
    all.push_back(RetrievalResult{entry.problem, entry.solution, total, std::move(b)});
  }
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(),
                    [](const RetrievalResult& a, const RetrievalResult& b) {
                      return detail::ranks_before(a.similarity, a.problem.case_id,
                                                  b.similarity, b.problem.case_id);
                    });
  all.resize(n);
  return all;
}

}  // namespace clarify
