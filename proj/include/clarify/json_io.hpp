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
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "clarify/error.hpp"

namespace clarify::json_io {

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

// Parses UTF-8 JSON text; syntax errors become ParseError with a line locator.
inline Json parse_document(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const std::size_t line = line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::kParse,
                std::string(what) + ": malformed JSON at line " +
                    std::to_string(line) + ": " + e.what(),
                Json{{"line", line}});
  }
}

[[noreturn]] inline void fail_field(const std::string& field,
                                    const std::string& message) {
  throw Error(ErrorCode::kParse, field + ": " + message, Json{{"field", field}});
}

inline void require_object(const Json& j, const std::string& field) {
  if (!j.is_object()) fail_field(field, "expected an object");
}

// Strict-mode key check: anything outside `allowed` is rejected.
inline void check_keys(const Json& j, const std::string& field,
                       std::initializer_list<std::string_view> allowed) {
  require_object(j, field);
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) fail_field(field, "unknown key \"" + key + "\"");
  }
}

inline std::string get_string(const Json& j, const std::string& field) {
  if (!j.is_string()) fail_field(field, "expected a string");
  return j.get<std::string>();
}

inline double get_number(const Json& j, const std::string& field) {
  if (!j.is_number()) fail_field(field, "expected a number");
  return j.get<double>();
}

inline bool get_bool(const Json& j, const std::string& field) {
  if (!j.is_boolean()) fail_field(field, "expected a boolean");
  return j.get<bool>();
}

inline const Json& require_array(const Json& j, const std::string& field) {
  if (!j.is_array()) fail_field(field, "expected an array");
  return j;
}

inline std::vector<std::string> get_string_array(const Json& j,
                                                 const std::string& field) {
  require_array(j, field);
  std::vector<std::string> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_string(j[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline const Json& require_key(const Json& j, const std::string& field,
                               const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail_field(field, std::string("missing key \"") + key + "\"");
  return *it;
}

inline std::string child(const std::string& field, std::string_view key) {
  return field.empty() ? std::string(key) : field + "." + std::string(key);
}

inline std::string index(const std::string& field, std::size_t i) {
  return field + "[" + std::to_string(i) + "]";
}

}  // namespace clarify::json_io
