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

// Test fixtures shared across suites.

#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "clarify/clarify.hpp"

namespace clarify::testing {

inline std::filesystem::path samples_dir() { return CLARIFY_SAMPLES_DIR "/vehicles"; }
inline std::filesystem::path golden_dir() { return CLARIFY_GOLDEN_DIR; }

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

/// thing -> {vehicle -> {car, truck}, animal}
inline constexpr const char* kTaxonomy = R"({
  "concepts": [
    {"id": "thing", "definition": "anything"},
    {"id": "vehicle", "definition": "a conveyance", "parents": ["thing"]},
    {"id": "car", "label": "Car", "definition": "a road vehicle", "parents": ["vehicle"]},
    {"id": "truck", "definition": "a heavy road vehicle", "parents": ["vehicle"]},
    {"id": "animal", "definition": "a living creature", "parents": ["thing"]}
  ]
})";

inline Ontology taxonomy() { return load_ontology(kTaxonomy); }

inline Ontology sample_ontology() { return load_ontology(read_text(samples_dir() / "ontology.json")); }

inline CaseBase sample_case_base(const Ontology& ont) {
  return load_case_base(read_text(samples_dir() / "cases.json"), ont);
}

inline Case sample_query(const char* name = "query.json") {
  return case_from_json(json_io::parse_document(read_text(samples_dir() / name), name), "case",
                        std::string("query"));
}

inline EngineConfig sample_config() { return load_engine_config(samples_dir() / "config.json"); }

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("clarify-test-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Copies the sample documents into `dir` and returns the config path there.
inline std::filesystem::path stage_samples(const TempDir& dir) {
  for (const char* f : {"ontology.json", "cases.json", "config.json", "query.json", "query_c2.json"}) {
    std::filesystem::copy_file(samples_dir() / f, dir / f,
                               std::filesystem::copy_options::overwrite_existing);
  }
  return dir / "config.json";
}

/// Removes decision_id and timestamp members at any depth.
inline Json strip_volatile(Json j) {
  if (j.is_object()) {
    j.erase("decision_id");
    j.erase("timestamp");
    j.erase("results");  // what-if variant ids
    for (auto& [_, v] : j.items()) v = strip_volatile(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_volatile(v);
  }
  return j;
}

}  // namespace clarify::testing
