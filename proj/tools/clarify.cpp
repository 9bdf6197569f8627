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

#include <pthread.h>
#include <signal.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "clarify/clarify.hpp"
#include "clarify/service.hpp"

namespace {

using clarify::Error;
using clarify::ErrorCode;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitEmptyBase = 2;
constexpr int kExitInternal = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyCaseBase:
      return kExitEmptyBase;
    case ErrorCode::kInconsistentInputs:
    case ErrorCode::kStorage:
    case ErrorCode::kInternal:
      return kExitInternal;
    default:
      return kExitInput;
  }
}

std::filesystem::path config_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("CLARIFY_CONFIG"); env != nullptr && *env != '\0') {
    return env;
  }
  throw Error(ErrorCode::kParse, "no config given: pass --config or set CLARIFY_CONFIG");
}

clarify::Case read_query(const std::string& path) {
  const std::string text = clarify::detail::read_file(path, "case file");
  return clarify::case_from_json(clarify::json_io::parse_document(text, path), "case",
                                 std::string("query"));
}

void report_storage_error(const Error& e) {
  std::cerr << "clarify: audit: " << e.what() << "\n";
}

int run_decide(const std::string& config_flag, const std::string& case_path,
               const std::string& template_name, bool as_json) {
  auto engine = clarify::Engine::from_config_file(config_path(config_flag));
  engine->set_storage_error_handler(report_storage_error);
  std::optional<clarify::ExplanationTemplate> tmpl;
  if (!template_name.empty()) tmpl = clarify::parse_template(template_name);
  const clarify::Case query = read_query(case_path);
  const clarify::DecisionDetails d = engine->decide(query, tmpl);
  if (as_json) {
    std::cout << clarify::decision_to_json(d).dump(2) << "\n";
  } else {
    const std::string& text = d.explanation.rendered_text;
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
  }
  return kExitOk;
}

int run_validate(const std::string& config_flag) {
  const clarify::EngineConfig config = clarify::load_engine_config(config_path(config_flag));
  const clarify::Ontology ont =
      clarify::load_ontology(clarify::detail::read_file(config.ontology_path, "ontology"));
  const auto entries = clarify::parse_case_base_document(
      clarify::detail::read_file(config.case_base_path, "case base"));

  // Grow a base entry by entry so duplicates and range disagreements are
  // reported alongside per-case violations.
  clarify::CaseBase base;
  std::size_t bad = 0;
  for (const clarify::CaseEntry& e : entries) {
    std::vector<clarify::Violation> vs = clarify::validate_case(e.problem, ont);
    auto sol = clarify::validate_solution(e.solution, e.problem.case_id, ont);
    vs.insert(vs.end(), sol.begin(), sol.end());
    auto ranges = base.range_conflicts(e.problem);
    vs.insert(vs.end(), ranges.begin(), ranges.end());
    const bool duplicate = base.find(e.problem.case_id) != nullptr;
    if (duplicate || !vs.empty()) {
      ++bad;
      if (duplicate) {
        std::cout << "case " << e.problem.case_id << ": duplicate case_id\n";
      }
      for (const auto& v : vs) {
        std::cout << "case " << e.problem.case_id << ": " << to_string(v.kind) << ": "
                  << v.message << "\n";
      }
      continue;
    }
    base = clarify::add_case(base, e.problem, e.solution, ont);
  }
  if (bad != 0) {
    std::cout << bad << " invalid case(s)\n";
    return kExitInput;
  }
  std::cout << "OK\n";
  return kExitOk;
}

int run_retrieve(const std::string& config_flag, const std::string& case_path, std::size_t k,
                 bool as_json) {
  auto engine = clarify::Engine::from_config_file(config_path(config_flag));
  const clarify::Case query = read_query(case_path);
  auto base = engine->snapshot();
  clarify::check_query(query, *base, engine->ontology());
  const auto results =
      clarify::retrieve_k(query, *base, k, engine->config().similarity, engine->ontology());
  if (as_json) {
    // Similarities are emitted as 4-decimal number literals, so the document is
    // assembled by hand around escaped string fields.
    std::string out = "{\"results\":[";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      if (i > 0) out += ",";
      out += "{\"rank\":" + std::to_string(i + 1) +
             ",\"case_id\":" + clarify::Json(r.problem.case_id).dump() +
             ",\"similarity\":" + clarify::format_fixed4(r.similarity) +
             ",\"action\":" + clarify::Json(r.solution.action).dump() + "}";
    }
    out += "]}";
    std::cout << out << "\n";
  } else {
    for (std::size_t i = 0; i < results.size(); ++i) {
      std::cout << (i + 1) << "\t" << results[i].problem.case_id << "\t"
                << clarify::format_fixed4(results[i].similarity) << "\t"
                << results[i].solution.action << "\n";
    }
  }
  return kExitOk;
}

int run_serve(const std::string& config_flag, std::optional<int> port_flag,
              const std::string& host) {
  int port = 8080;
  if (port_flag) {
    port = *port_flag;
  } else if (const char* env = std::getenv("CLARIFY_PORT"); env != nullptr && *env != '\0') {
    port = std::atoi(env);
  }

  // Signals are taken synchronously by one thread; block them everywhere else
  // before the server spawns its workers.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto engine = clarify::Engine::from_config_file(config_path(config_flag));
  engine->set_storage_error_handler(report_storage_error);
  clarify::Service service(*engine);
  httplib::Server server;
  service.mount(server);

  if (!server.bind_to_port(host, port)) {
    std::cerr << "clarify: cannot bind " << host << ":" << port << "\n";
    return kExitInput;
  }
  std::cerr << "clarify: listening on " << host << ":" << port << "\n";

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.wait_until_ready();
    server.stop();
  });
  server.listen_after_bind();
  // listen returns either after stop() or on its own; make sure the waiter
  // wakes up in the latter case.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  std::cerr << "clarify: stopped\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Case-based decision support with ontology-grounded explanations"};
  app.require_subcommand(1);

  std::string config;
  std::string case_path;
  std::string template_name;
  bool as_json = false;
  std::size_t k = 1;
  std::optional<int> port;
  std::string host = "0.0.0.0";

  auto* decide = app.add_subcommand("decide", "Decide a case and print its explanation");
  decide->add_option("--config", config, "Engine config file");
  decide->add_option("--case", case_path, "Query case document")->required();
  decide->add_option("--template", template_name, "Explanation template (rich, alg2-literal)");
  decide->add_flag("--json", as_json, "Emit the full decision document");

  auto* validate = app.add_subcommand("validate", "Cross-validate ontology and case base");
  validate->add_option("--config", config, "Engine config file");

  auto* retrieve = app.add_subcommand("retrieve", "List the k most similar stored cases");
  retrieve->add_option("--config", config, "Engine config file");
  retrieve->add_option("--case", case_path, "Query case document")->required();
  retrieve->add_option("-k", k, "Number of results")->check(CLI::PositiveNumber);
  retrieve->add_flag("--json", as_json, "Emit JSON");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config, "Engine config file");
  serve->add_option("--port", port, "Port (default CLARIFY_PORT or 8080)");
  serve->add_option("--host", host, "Bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*decide) return run_decide(config, case_path, template_name, as_json);
    if (*validate) return run_validate(config);
    if (*retrieve) return run_retrieve(config, case_path, k, as_json);
    if (*serve) return run_serve(config, port, host);
  } catch (const Error& e) {
    std::cerr << "clarify: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "clarify: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
