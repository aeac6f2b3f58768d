// Copyright 2026 The Claims Validation Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration, the shared validation pipeline behind the CLI and the
// HTTP service, and the service itself.

#ifndef CLAIMS_INTERFACE_H_
#define CLAIMS_INTERFACE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "claims/adjudicator.h"
#include "claims/knowledge_store.h"
#include "claims/lexicon.h"
#include "claims/ontology.h"
#include "claims/prover.h"
#include "json.hpp"

namespace claims {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Contents of config.json. Relative paths are resolved against the
// directory holding the config file.
//
//   {"budget_ms": 500, "max_clauses": 20000, "max_edit": 1,
//    "lexicon": "lexicon.txt", "ontology": ["a.onto", ...], "kb": "kb",
//    "escalation_dir": "outbox/escalated", "report_dir": "outbox/reports",
//    "host": "127.0.0.1", "port": 8080, "audit": true}
struct RunConfig {
  Budget budget;
  int max_edit = 1;
  std::filesystem::path lexicon_path;
  std::vector<std::filesystem::path> ontology_paths;
  std::filesystem::path kb_path;
  std::filesystem::path escalation_dir;
  std::filesystem::path report_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  // Append every adjudication to the knowledge base audit log.
  bool audit = true;

  // Throws ConfigError on unreadable JSON, missing fields, a non-positive
  // budget or a lexicon/ontology path that does not exist.
  static RunConfig Load(const std::filesystem::path &path);
  static RunConfig FromJson(const nlohmann::json &j, const std::filesystem::path &base_dir);
};

// Loaded lexicon, ontology and knowledge base. Run() may be called from
// several threads at once.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);

  const RunConfig &config() const { return config_; }
  const Lexicon &lexicon() const { return lexicon_; }
  const Ontology &ontology() const { return ontology_; }
  KnowledgeStore &kb() { return *kb_; }
  AdjudicatorOptions options() const;

  struct Outcome {
    Adjudication adjudication;
    // Canonical JSON report, identical for the CLI and the service.
    std::string report;
    std::filesystem::path report_path;
    uint64_t audit_seq = 0;  // 0 when auditing is off
  };

  // Adjudicates, appends to the audit log and writes the report to
  // report_dir (AUTO_*) or escalation_dir (ESCALATED).
  Outcome Run(const Bill &bill);
  // As Run, but a malformed document becomes a MALFORMED_BILL escalation
  // filed under `fallback_id`.
  Outcome RunDocument(std::string_view json_text, const std::string &fallback_id);

  // Readiness of each component.
  nlohmann::ordered_json Health() const;

 private:
  Outcome Finish(Adjudication a, const nlohmann::ordered_json &bill_json);

  RunConfig config_;
  Lexicon lexicon_;
  Ontology ontology_;
  std::unique_ptr<KnowledgeStore> kb_;
};

// HTTP front end:
//   POST /v1/validate                       bill JSON -> adjudication JSON
//   GET  /v1/benchmarks/{type}/{subtype}    benchmark JSON
//   GET  /v1/health                         readiness flags
// Errors use {"error": {"code": ..., "message": ...}}. Every response has
// an X-Elapsed-Ms header.
class HttpService {
 public:
  explicit HttpService(Pipeline *pipeline);
  ~HttpService();

  // Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int Bind(const std::string &host, int port);
  // Serves until Stop(); returns false if the listener failed.
  bool Listen();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Makes a bill id safe to use as a file name.
std::string ReportFileName(const std::string &bill_id);

}  // namespace claims

#endif  // CLAIMS_INTERFACE_H_
