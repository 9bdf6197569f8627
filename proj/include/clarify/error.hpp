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

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "json.hpp"

namespace clarify {

// Insertion-ordered so serialized documents keep a fixed, readable key order.
using Json = nlohmann::ordered_json;

enum class ErrorCode {
  kParse,
  kValidation,
  kUnknownConcept,
  kTypeMismatch,
  kRangeMismatch,
  kNoComparableFeatures,
  kEmptyCaseBase,
  kDuplicateCaseId,
  kUnknownTemplate,
  kInconsistentInputs,
  kStorage,
  kInternal,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kUnknownConcept: return "UnknownConcept";
    case ErrorCode::kTypeMismatch: return "TypeMismatch";
    case ErrorCode::kRangeMismatch: return "RangeMismatch";
    case ErrorCode::kNoComparableFeatures: return "NoComparableFeatures";
    case ErrorCode::kEmptyCaseBase: return "EmptyCaseBase";
    case ErrorCode::kDuplicateCaseId: return "DuplicateCaseId";
    case ErrorCode::kUnknownTemplate: return "UnknownTemplate";
    case ErrorCode::kInconsistentInputs: return "InconsistentInputs";
    case ErrorCode::kStorage: return "StorageError";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Internal";
}

// Every failure raised by the library. `detail` carries a structured payload
// (violation lists, cycle sequences, locators) that the service forwards.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, Json detail = nullptr)
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const Json& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  Json detail_;
};

}  // namespace clarify
