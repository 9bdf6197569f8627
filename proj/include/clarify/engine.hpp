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

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clarify/adaptation.hpp"
#include "clarify/casebase.hpp"
#include "clarify/error.hpp"
#include "clarify/explanation.hpp"
#include "clarify/ontology.hpp"
#include "clarify/retrieval.hpp"
#include "clarify/similarity.hpp"

namespace clarify {

inline constexpr std::string_view kEngineVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Configuration

struct EngineConfig {
  SimilarityConfig similarity;
  AdaptationStrategy adaptation_strategy = AdaptationStrategy::kNull;
  ExplanationTemplate template_id = ExplanationTemplate::kRich;
  std::filesystem::path ontology_path;
  std::filesystem::path case_base_path;
  std::optional<std::filesystem::path> audit_log_path;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

/// The parameters that shape a decision. Paths are excluded: they locate
/// inputs whose identity the audit record carries separately.
inline Json decision_parameters_to_json(const EngineConfig& c) {
  return Json{{"similarity", similarity_config_to_json(c.similarity)},
              {"adaptation_strategy", to_string(c.adaptation_strategy)},
              {"template", to_string(c.template_id)}};
}

namespace detail {

inline void apply_decision_parameters(const Json& j, const std::string& field,
                                      EngineConfig& c) {
  using namespace json_io;
  if (auto it = j.find("similarity"); it != j.end()) {
    c.similarity = similarity_config_from_json(*it, child(field, "similarity"));
  }
  if (auto it = j.find("adaptation_strategy"); it != j.end()) {
    const std::string f = child(field, "adaptation_strategy");
    const std::string name = get_string(*it, f);
    auto s = parse_adaptation_strategy(name);
    if (!s) {
      throw Error(ErrorCode::kValidation, f + ": unknown adaptation strategy \"" + name + "\"",
                  Json{{"field", f}});
    }
    c.adaptation_strategy = *s;
  }
  if (auto it = j.find("template"); it != j.end()) {
    c.template_id = parse_template(get_string(*it, child(field, "template")));
  }
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string read_file(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kParse,
                "cannot read " + std::string(what) + " \"" + path.string() + "\"",
                Json{{"path", path.string()}});
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) {
      throw Error(ErrorCode::kStorage, "cannot write \"" + tmp.string() + "\"",
                  Json{{"path", tmp.string()}});
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(ErrorCode::kStorage,
                "cannot replace \"" + path.string() + "\": " + ec.message(),
                Json{{"path", path.string()}});
  }
}

}  // namespace detail

/// Stable hash of the decision-shaping configuration, as 16 hex digits.
inline std::string config_fingerprint(const EngineConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    detail::fnv1a64(decision_parameters_to_json(c).dump())));
  return buf;
}

/// Relative paths resolve against `base_dir`.
inline EngineConfig parse_engine_config(std::string_view text,
                                        const std::filesystem::path& base_dir = {}) {
  using namespace json_io;
  const Json doc = parse_document(text, "engine config");
  check_keys(doc, "config", {"ontology_path", "case_base_path", "audit_log_path",
                             "similarity", "adaptation_strategy", "template"});
  EngineConfig c;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  c.ontology_path = resolve(get_string(require_key(doc, "config", "ontology_path"), "ontology_path"));
  c.case_base_path =
      resolve(get_string(require_key(doc, "config", "case_base_path"), "case_base_path"));
  if (auto it = doc.find("audit_log_path"); it != doc.end() && !it->is_null()) {
    c.audit_log_path = resolve(get_string(*it, "audit_log_path"));
  }
  detail::apply_decision_parameters(doc, "", c);
  return c;
}

inline EngineConfig load_engine_config(const std::filesystem::path& path) {
  return parse_engine_config(detail::read_file(path, "config"), path.parent_path());
}

// ---------------------------------------------------------------------------
// Decisions

struct DecisionDetails {
  Case similar_case;
  Solution solution;  // adapted
  Explanation explanation;
  std::string decision_id;
  std::string timestamp;
  std::string engine_version{kEngineVersion};
  std::uint64_t case_base_version = 0;

  double similarity() const { return explanation.retrieval_summary.similarity; }

  friend bool operator==(const DecisionDetails&, const DecisionDetails&) = default;
};

/// Equality ignoring decision_id and timestamp.
inline bool same_decision(const DecisionDetails& a, const DecisionDetails& b) {
  return a.similar_case == b.similar_case && a.solution == b.solution &&
         a.explanation == b.explanation && a.engine_version == b.engine_version &&
         a.case_base_version == b.case_base_version;
}

inline std::string make_decision_id() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  const std::uint64_t hi = rng();
  const std::uint64_t lo = rng();
  unsigned char b[16];
  for (int i = 0; i < 8; ++i) {
    b[i] = static_cast<unsigned char>(hi >> (56 - 8 * i));
    b[8 + i] = static_cast<unsigned char>(lo >> (56 - 8 * i));
  }
  b[6] = static_cast<unsigned char>((b[6] & 0x0f) | 0x40);
  b[8] = static_cast<unsigned char>((b[8] & 0x3f) | 0x80);
  char out[37];
  std::snprintf(out, sizeof(out),
                "%02x%02x%02x%02x-%02x%02x-%02x%02x-%02x%02x-%02x%02x%02x%02x%02x%02x",
                b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7], b[8], b[9], b[10], b[11],
                b[12], b[13], b[14], b[15]);
  return out;
}

inline std::string utc_timestamp() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()) % 1000;
  const std::time_t t = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms.count()));
  return buf;
}

inline Json decision_to_json(const DecisionDetails& d) {
  return Json{{"decision_id", d.decision_id},
              {"timestamp", d.timestamp},
              {"engine_version", d.engine_version},
              {"case_base_version", d.case_base_version},
              {"similar_case", case_to_json(d.similar_case)},
              {"solution", solution_to_json(d.solution)},
              {"similarity", d.similarity()},
              {"explanation", explanation_to_json(d.explanation)}};
}

inline DecisionDetails decision_from_json(const Json& j, const std::string& field) {
  using namespace json_io;
  check_keys(j, field, {"decision_id", "timestamp", "engine_version", "case_base_version",
                        "similar_case", "solution", "similarity", "explanation"});
  DecisionDetails d;
  d.decision_id = get_string(require_key(j, field, "decision_id"), child(field, "decision_id"));
  d.timestamp = get_string(require_key(j, field, "timestamp"), child(field, "timestamp"));
  d.engine_version =
      get_string(require_key(j, field, "engine_version"), child(field, "engine_version"));
  const Json& v = require_key(j, field, "case_base_version");
  if (!v.is_number_unsigned()) fail_field(child(field, "case_base_version"), "expected a count");
  d.case_base_version = v.get<std::uint64_t>();
  d.similar_case = case_from_json(require_key(j, field, "similar_case"), child(field, "similar_case"));
  d.solution = solution_from_json(require_key(j, field, "solution"), child(field, "solution"));
  d.explanation =
      explanation_from_json(require_key(j, field, "explanation"), child(field, "explanation"));
  return d;
}

/// Input processing: the query must validate against the ontology and agree
/// with the case base's declared numeric ranges.
inline void check_query(const Case& query, const CaseBase& base, const Ontology& ont) {
  std::vector<Violation> vs = validate_case(query, ont);
  auto conflicts = base.range_conflicts(query);
  vs.insert(vs.end(), conflicts.begin(), conflicts.end());
  if (!vs.empty()) {
    std::string msg = "query case is invalid: " + vs.front().message;
    if (vs.size() > 1) msg += " (+" + std::to_string(vs.size() - 1) + " more)";
    throw Error(ErrorCode::kValidation, msg,
                Json{{"case_id", query.case_id}, {"violations", violations_to_json(vs)}});
  }
}

/// Retrieve, adapt, explain. Pure apart from the generated id and timestamp.
inline DecisionDetails run_decision_pipeline(const Case& query, const CaseBase& base,
                                             const Ontology& ont, const EngineConfig& config) {
  check_query(query, base, ont);
  RetrievalResult retrieved = retrieve_similar_case(query, base, config.similarity, ont);
  AdaptationRecord adapted = adapt_solution(query, retrieved, ont, config.adaptation_strategy);
  Explanation explanation = build_explanation(retrieved, adapted, ont, config.template_id);
  DecisionDetails d;
  d.similar_case = std::move(retrieved.problem);
  d.solution = adapted.adapted;
  d.explanation = std::move(explanation);
  d.decision_id = make_decision_id();
  d.timestamp = utc_timestamp();
  d.case_base_version = base.source_version();
  return d;
}

// ---------------------------------------------------------------------------
// Audit log

inline std::string outcome_code(ErrorCode code) { return std::string(to_string(code)); }

struct AuditRecord {
  std::string kind = "decision";  // "decision" or "whatif"
  std::string decision_id;
  std::string timestamp;
  Case query;
  Json parameters;  // decision_parameters_to_json of the effective config
  std::string config_fingerprint;
  std::string engine_version{kEngineVersion};
  std::uint64_t case_base_version = 0;
  std::string outcome = "success";  // or an error code name
  std::string error_message;
  std::optional<DecisionDetails> decision;
  Json overrides = nullptr;          // what-if only
  std::vector<std::string> results;  // what-if only: decision ids of the variants

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

inline Json audit_record_to_json(const AuditRecord& r) {
  Json j{{"kind", r.kind},
         {"decision_id", r.decision_id},
         {"timestamp", r.timestamp},
         {"engine_version", r.engine_version},
         {"case_base_version", r.case_base_version},
         {"config_fingerprint", r.config_fingerprint},
         {"parameters", r.parameters},
         {"query", case_to_json(r.query)},
         {"outcome", r.outcome}};
  if (!r.error_message.empty()) j["error_message"] = r.error_message;
  if (r.decision) j["decision"] = decision_to_json(*r.decision);
  if (!r.overrides.is_null()) j["overrides"] = r.overrides;
  if (!r.results.empty()) j["results"] = r.results;
  return j;
}

inline AuditRecord audit_record_from_json(const Json& j) {
  using namespace json_io;
  const std::string field = "audit";
  check_keys(j, field, {"kind", "decision_id", "timestamp", "engine_version",
                        "case_base_version", "config_fingerprint", "parameters", "query",
                        "outcome", "error_message", "decision", "overrides", "results"});
  AuditRecord r;
  r.kind = get_string(require_key(j, field, "kind"), "kind");
  r.decision_id = get_string(require_key(j, field, "decision_id"), "decision_id");
  r.timestamp = get_string(require_key(j, field, "timestamp"), "timestamp");
  r.engine_version = get_string(require_key(j, field, "engine_version"), "engine_version");
  const Json& v = require_key(j, field, "case_base_version");
  if (!v.is_number_unsigned()) fail_field("case_base_version", "expected a count");
  r.case_base_version = v.get<std::uint64_t>();
  r.config_fingerprint =
      get_string(require_key(j, field, "config_fingerprint"), "config_fingerprint");
  r.parameters = require_key(j, field, "parameters");
  require_object(r.parameters, "parameters");
  r.query = case_from_json(require_key(j, field, "query"), "query");
  r.outcome = get_string(require_key(j, field, "outcome"), "outcome");
  if (auto it = j.find("error_message"); it != j.end()) {
    r.error_message = get_string(*it, "error_message");
  }
  if (auto it = j.find("decision"); it != j.end()) r.decision = decision_from_json(*it, "decision");
  if (auto it = j.find("overrides"); it != j.end()) r.overrides = *it;
  if (auto it = j.find("results"); it != j.end()) r.results = get_string_array(*it, "results");
  return r;
}

/// Append-only, line-delimited JSON. Appends are serialized and each record
/// goes out in a single O_APPEND write so lines never interleave.
class AuditLog {
 public:
  explicit AuditLog(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }

  void append(const AuditRecord& record) {
    std::string line =
        audit_record_to_json(record).dump(-1, ' ', false, Json::error_handler_t::replace);
    line += '\n';
    std::lock_guard lock(mu_);
    const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) fail("open");
    std::size_t written = 0;
    while (written < line.size()) {
      const ssize_t n = ::write(fd, line.data() + written, line.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        const int saved = errno;
        ::close(fd);
        errno = saved;
        fail("write");
      }
      written += static_cast<std::size_t>(n);
    }
    if (::close(fd) != 0) fail("close");
  }

 private:
  [[noreturn]] void fail(const char* op) const {
    throw Error(ErrorCode::kStorage,
                std::string("audit log ") + op + " failed for \"" + path_.string() +
                    "\": " + std::strerror(errno),
                Json{{"path", path_.string()}});
  }

  std::filesystem::path path_;
  std::mutex mu_;
};

/// Receives storage failures that must not abort the decision itself.
using StorageErrorHandler = std::function<void(const Error&)>;

inline void append_audit_record(AuditLog& log, const AuditRecord& record,
                                const StorageErrorHandler& on_error = {}) {
  try {
    log.append(record);
  } catch (const Error& e) {
    if (on_error) on_error(e);
  }
}

struct AuditLineError {
  std::size_t line;
  std::string message;
};

struct AuditLogContents {
  std::vector<AuditRecord> records;
  std::vector<AuditLineError> errors;
};

/// Reads every well-formed line; malformed ones are reported by line number
/// and skipped.
inline AuditLogContents read_audit_log(std::istream& in) {
  AuditLogContents out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      out.records.push_back(audit_record_from_json(json_io::parse_document(line, "audit line")));
    } catch (const Error& e) {
      out.errors.push_back({number, e.what()});
    }
  }
  return out;
}

inline AuditLogContents read_audit_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kStorage, "cannot read audit log \"" + path.string() + "\"",
                Json{{"path", path.string()}});
  }
  return read_audit_log(in);
}

inline AuditRecord make_audit_record(const Case& query, const CaseBase& base,
                                     const EngineConfig& config) {
  AuditRecord r;
  r.query = query;
  r.parameters = decision_parameters_to_json(config);
  r.config_fingerprint = config_fingerprint(config);
  r.case_base_version = base.source_version();
  return r;
}

/// Retrieve, adapt, and explain one query. When `audit` is given the outcome
/// is appended to it whether the decision succeeds or fails; an audit write
/// failure goes to `on_storage_error` and never replaces the decision result.
inline DecisionDetails clarify_decision(const Case& query, const CaseBase& base,
                                        const Ontology& ont, const EngineConfig& config,
                                        AuditLog* audit = nullptr,
                                        const StorageErrorHandler& on_storage_error = {}) {
  try {
    DecisionDetails d = run_decision_pipeline(query, base, ont, config);
    if (audit != nullptr) {
      AuditRecord r = make_audit_record(query, base, config);
      r.decision_id = d.decision_id;
      r.timestamp = d.timestamp;
      r.decision = d;
      append_audit_record(*audit, r, on_storage_error);
    }
    return d;
  } catch (const Error& e) {
    if (audit != nullptr) {
      AuditRecord r = make_audit_record(query, base, config);
      r.decision_id = make_decision_id();
      r.timestamp = utc_timestamp();
      r.outcome = outcome_code(e.code());
      r.error_message = e.what();
      append_audit_record(*audit, r, on_storage_error);
    }
    throw;
  }
}

/// Recomputes a recorded decision from its query and parameters.
inline DecisionDetails replay_audit_record(const AuditRecord& record, const CaseBase& base,
                                           const Ontology& ont) {
  EngineConfig config;
  detail::apply_decision_parameters(record.parameters, "parameters", config);
  return run_decision_pipeline(record.query, base, ont, config);
}

// ---------------------------------------------------------------------------
// What-if

struct FeatureOverride {
  FeatureMap features;
};

inline Json overrides_to_json(const std::vector<FeatureOverride>& overrides) {
  Json out = Json::array();
  for (const auto& o : overrides) out.push_back(Json{{"features", features_to_json(o.features)}});
  return out;
}

inline std::vector<FeatureOverride> overrides_from_json(const Json& j, const std::string& field) {
  using namespace json_io;
  require_array(j, field);
  std::vector<FeatureOverride> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = index(field, i);
    check_keys(j[i], f, {"features"});
    out.push_back(FeatureOverride{features_from_json(require_key(j[i], f, "features"),
                                                     child(f, "features"))});
  }
  return out;
}

/// Applies every override to `baseline`; each must name an existing feature
/// with a value of the same kind (and, for numerics, the same range).
inline std::vector<Case> apply_overrides(const Case& baseline,
                                         const std::vector<FeatureOverride>& overrides) {
  std::vector<Case> variants;
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    Case variant = baseline;
    for (const auto& [name, value] : overrides[i].features) {
      auto it = variant.features.find(name);
      auto fail = [&](const std::string& why) {
        throw Error(ErrorCode::kValidation,
                    "override " + std::to_string(i) + ": feature \"" + name + "\" " + why,
                    Json{{"override_index", i}, {"feature", name}});
      };
      if (it == variant.features.end()) fail("does not exist in the case");
      if (it->second.index() != value.index()) {
        fail("expects a " + std::string(type_name(it->second)) + " value");
      }
      if (const auto* n = std::get_if<Numeric>(&value)) {
        const auto& cur = std::get<Numeric>(it->second);
        if (cur.lo != n->lo || cur.hi != n->hi) fail("changes the declared range");
      }
      it->second = value;
    }
    variants.push_back(std::move(variant));
  }
  return variants;
}

/// Baseline decision followed by one decision per override, in order.
inline std::vector<DecisionDetails> what_if(const Case& baseline,
                                            const std::vector<FeatureOverride>& overrides,
                                            const CaseBase& base, const Ontology& ont,
                                            const EngineConfig& config) {
  const std::vector<Case> variants = apply_overrides(baseline, overrides);
  std::vector<DecisionDetails> out;
  out.push_back(run_decision_pipeline(baseline, base, ont, config));
  for (std::size_t i = 0; i < variants.size(); ++i) {
    try {
      out.push_back(run_decision_pipeline(variants[i], base, ont, config));
    } catch (const Error& e) {
      Json detail = e.detail().is_object() ? e.detail() : Json::object();
      detail["override_index"] = i;
      throw Error(e.code(), "override " + std::to_string(i) + ": " + e.what(),
                  std::move(detail));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Engine

/// Owns the loaded knowledge and serves decisions against consistent
/// snapshots. The ontology is immutable; the case base is swapped wholesale
/// on every add so in-flight decisions keep the snapshot they started with.
class Engine {
 public:
  Engine(EngineConfig config, Ontology ontology, CaseBase base)
      : config_(std::move(config)),
        ontology_(std::make_shared<const Ontology>(std::move(ontology))),
        base_(std::make_shared<const CaseBase>(std::move(base))) {
    if (config_.audit_log_path) audit_ = std::make_unique<AuditLog>(*config_.audit_log_path);
  }

  /// Loads and cross-validates every referenced document.
  static std::unique_ptr<Engine> from_config(EngineConfig config) {
    Ontology ont = load_ontology(detail::read_file(config.ontology_path, "ontology"));
    CaseBase base = load_case_base(detail::read_file(config.case_base_path, "case base"), ont);
    return std::make_unique<Engine>(std::move(config), std::move(ont), std::move(base));
  }

  static std::unique_ptr<Engine> from_config_file(const std::filesystem::path& path) {
    return from_config(load_engine_config(path));
  }

  const EngineConfig& config() const { return config_; }
  const Ontology& ontology() const { return *ontology_; }
  AuditLog* audit_log() { return audit_.get(); }

  std::shared_ptr<const CaseBase> snapshot() const {
    std::shared_lock lock(base_mu_);
    return base_;
  }

  void set_storage_error_handler(StorageErrorHandler handler) {
    on_storage_error_ = std::move(handler);
  }

  EngineConfig effective_config(std::optional<ExplanationTemplate> template_override) const {
    EngineConfig c = config_;
    if (template_override) c.template_id = *template_override;
    return c;
  }

  DecisionDetails decide(const Case& query,
                         std::optional<ExplanationTemplate> template_override = std::nullopt) {
    auto base = snapshot();
    return clarify_decision(query, *base, *ontology_, effective_config(template_override),
                            audit_.get(), on_storage_error_);
  }

  /// Variants are not audited as decisions; one what-if record covers the call.
  std::vector<DecisionDetails> explore(const Case& baseline,
                                       const std::vector<FeatureOverride>& overrides,
                                       std::optional<ExplanationTemplate> template_override =
                                           std::nullopt) {
    auto base = snapshot();
    const EngineConfig config = effective_config(template_override);
    AuditRecord r = make_audit_record(baseline, *base, config);
    r.kind = "whatif";
    r.decision_id = make_decision_id();
    r.timestamp = utc_timestamp();
    r.overrides = overrides_to_json(overrides);
    try {
      auto results = what_if(baseline, overrides, *base, *ontology_, config);
      for (const auto& d : results) r.results.push_back(d.decision_id);
      if (audit_) append_audit_record(*audit_, r, on_storage_error_);
      return results;
    } catch (const Error& e) {
      r.outcome = outcome_code(e.code());
      r.error_message = e.what();
      if (audit_) append_audit_record(*audit_, r, on_storage_error_);
      throw;
    }
  }

  /// Appends a case and persists the case base file before publishing the
  /// new snapshot.
  std::shared_ptr<const CaseBase> add(Case c, Solution s) {
    std::lock_guard writer(write_mu_);
    auto current = snapshot();
    auto next = std::make_shared<const CaseBase>(
        add_case(*current, std::move(c), std::move(s), *ontology_));
    if (!config_.case_base_path.empty()) {
      detail::write_file_atomic(config_.case_base_path, save_case_base(*next));
    }
    std::unique_lock lock(base_mu_);
    base_ = next;
    return next;
  }

 private:
  EngineConfig config_;
  std::shared_ptr<const Ontology> ontology_;
  mutable std::shared_mutex base_mu_;
  std::mutex write_mu_;
  std::shared_ptr<const CaseBase> base_;
  std::unique_ptr<AuditLog> audit_;
  StorageErrorHandler on_storage_error_;
};

}  // namespace clarify
