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

#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clarify/engine.hpp"
#include "clarify/error.hpp"
#include "httplib.h"

namespace clarify {

/// Closed set of wire error codes.
enum class ApiErrorCode {
  kParseError,
  kValidationError,
  kEmptyCaseBase,
  kUnknownConcept,
  kNotFound,
  kInternal,
};

inline std::string_view to_string(ApiErrorCode c) {
  switch (c) {
    case ApiErrorCode::kParseError: return "PARSE_ERROR";
    case ApiErrorCode::kValidationError: return "VALIDATION_ERROR";
    case ApiErrorCode::kEmptyCaseBase: return "EMPTY_CASE_BASE";
    case ApiErrorCode::kUnknownConcept: return "UNKNOWN_CONCEPT";
    case ApiErrorCode::kNotFound: return "NOT_FOUND";
    case ApiErrorCode::kInternal: return "INTERNAL";
  }
  return "INTERNAL";
}

struct ApiError {
  ApiErrorCode code;
  std::string message;
  Json detail = nullptr;
};

struct ApiResponse {
  int status = 200;
  std::string body;
};

inline Json api_error_to_json(const ApiError& e) {
  Json j{{"code", to_string(e.code)},
         {"message", e.message.empty() ? std::string(to_string(e.code)) : e.message}};
  if (!e.detail.is_null()) j["detail"] = e.detail;
  return j;
}

/// HTTP status and wire code for a library error.
inline std::pair<int, ApiErrorCode> classify(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
      return {400, ApiErrorCode::kParseError};
    case ErrorCode::kValidation:
    case ErrorCode::kTypeMismatch:
    case ErrorCode::kRangeMismatch:
    case ErrorCode::kNoComparableFeatures:
    case ErrorCode::kUnknownTemplate:
      return {400, ApiErrorCode::kValidationError};
    case ErrorCode::kDuplicateCaseId:
      return {409, ApiErrorCode::kValidationError};
    case ErrorCode::kEmptyCaseBase:
      return {409, ApiErrorCode::kEmptyCaseBase};
    case ErrorCode::kUnknownConcept:
      return {400, ApiErrorCode::kUnknownConcept};
    case ErrorCode::kInconsistentInputs:
    case ErrorCode::kStorage:
    case ErrorCode::kInternal:
      break;
  }
  return {500, ApiErrorCode::kInternal};
}

/// Request router for the /v1 JSON API. `handle` is transport-free so it can
/// be exercised directly; `mount` wires it into an httplib server.
class Service {
 public:
  explicit Service(Engine& engine) : engine_(engine) {}

  ApiResponse handle(std::string_view method, std::string_view path,
                     std::string_view body) const {
    try {
      return route(method, path, body);
    } catch (const Error& e) {
      auto [status, code] = classify(e.code());
      return error(status, code, e.what(), e.detail());
    } catch (const std::exception& e) {
      return error(500, ApiErrorCode::kInternal, e.what());
    }
  }

  void mount(httplib::Server& server) const {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      ApiResponse r = handle(req.method, req.path, req.body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Delete(".*", handler);
    server.Patch(".*", handler);
  }

 private:
  static ApiResponse ok(int status, const Json& body) {
    return {status, body.dump(-1, ' ', false, Json::error_handler_t::replace)};
  }

  static ApiResponse error(int status, ApiErrorCode code, std::string message,
                           Json detail = nullptr) {
    return ok(status, api_error_to_json(ApiError{code, std::move(message), std::move(detail)}));
  }

  static ApiResponse not_found(std::string message) {
    return error(404, ApiErrorCode::kNotFound, std::move(message));
  }

  static std::vector<std::string_view> split(std::string_view path) {
    std::vector<std::string_view> parts;
    while (!path.empty()) {
      if (path.front() == '/') {
        path.remove_prefix(1);
        continue;
      }
      const auto slash = path.find('/');
      parts.push_back(path.substr(0, slash));
      if (slash == std::string_view::npos) break;
      path.remove_prefix(slash);
    }
    return parts;
  }

  // Request bodies for decisions and what-if are a case document plus
  // optional control fields.
  struct DecisionRequest {
    Case query;
    std::optional<ExplanationTemplate> template_id;
    std::vector<FeatureOverride> overrides;
  };

  static DecisionRequest parse_decision_request(std::string_view body, bool with_overrides) {
    using namespace json_io;
    Json doc = parse_document(body, "request");
    require_object(doc, "request");
    DecisionRequest req;
    if (auto it = doc.find("template"); it != doc.end()) {
      req.template_id = parse_template(get_string(*it, "template"));
      doc.erase("template");
    }
    if (with_overrides) {
      if (auto it = doc.find("overrides"); it != doc.end()) {
        req.overrides = overrides_from_json(*it, "overrides");
        doc.erase("overrides");
      }
    }
    req.query = case_from_json(doc, "case", std::string("query"));
    return req;
  }

  ApiResponse route(std::string_view method, std::string_view path,
                    std::string_view body) const {
    const auto parts = split(path);
    if (parts.size() < 2 || parts[0] != "v1") return not_found("no route for " + std::string(path));
    const std::string_view resource = parts[1];

    if (resource == "health" && parts.size() == 2 && method == "GET") {
      return ok(200, Json{{"status", "ok"},
                          {"engine_version", kEngineVersion},
                          {"case_base_version", engine_.snapshot()->source_version()}});
    }
    if (resource == "decisions" && parts.size() == 2 && method == "POST") {
      DecisionRequest req = parse_decision_request(body, false);
      return ok(200, decision_to_json(engine_.decide(req.query, req.template_id)));
    }
    if (resource == "whatif" && parts.size() == 2 && method == "POST") {
      DecisionRequest req = parse_decision_request(body, true);
      Json out = Json::array();
      for (const auto& d : engine_.explore(req.query, req.overrides, req.template_id)) {
        out.push_back(decision_to_json(d));
      }
      return ok(200, out);
    }
    if (resource == "cases") {
      if (parts.size() == 2 && method == "GET") {
        auto base = engine_.snapshot();
        Json j = case_base_to_json(*base);
        j["case_base_version"] = base->source_version();
        return ok(200, j);
      }
      if (parts.size() == 2 && method == "POST") {
        CaseEntry entry =
            entry_from_json(json_io::parse_document(body, "request"), "case");
        auto base = engine_.add(entry.problem, entry.solution);
        return ok(201, entry_to_json(*base->find(entry.problem.case_id)));
      }
      if (parts.size() == 3 && method == "GET") {
        auto base = engine_.snapshot();
        const CaseEntry* e = base->find(parts[2]);
        if (e == nullptr) return not_found("no case \"" + std::string(parts[2]) + "\"");
        return ok(200, entry_to_json(*e));
      }
    }
    if (resource == "ontology" && method == "GET") {
      const Ontology& ont = engine_.ontology();
      if (parts.size() == 2) return ok(200, ontology_to_json(ont));
      if (parts.size() == 4 && parts[2] == "concepts") {
        if (!ont.contains(parts[3])) {
          return not_found("no concept \"" + std::string(parts[3]) + "\"");
        }
        const Concept& c = ont.concept_at(parts[3]);
        return ok(200, Json{{"id", c.id},
                            {"label", c.label},
                            {"definition", c.definition},
                            {"parents", c.parents},
                            {"depth", ont.depth(c.id)}});
      }
    }
    return not_found("no route for " + std::string(method) + " " + std::string(path));
  }

  Engine& engine_;
};

}  // namespace clarify
