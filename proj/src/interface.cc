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

#include "claims/interface.h"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>

#include "httplib.h"

namespace claims {
namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

fs::path Resolve(const fs::path &base, const std::string &p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

void WriteAtomically(const fs::path &path, const std::string &bytes) {
  static std::atomic<uint64_t> counter{0};
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

ordered_json ErrorEnvelope(const std::string &code, const std::string &message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

std::string ReportFileName(const std::string &bill_id) {
  std::string out;
  for (char c : bill_id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  if (out.empty() || out[0] == '.') out = "bill" + out;
  return out + ".json";
}

RunConfig RunConfig::FromJson(const json &j, const fs::path &base_dir) {
  try {
    RunConfig c;
    c.budget.max_duration = std::chrono::milliseconds(j.value("budget_ms", 500));
    c.budget.max_clauses = j.value("max_clauses", 20000);
    c.max_edit = j.value("max_edit", 1);
    c.lexicon_path = Resolve(base_dir, j.at("lexicon").get<std::string>());
    const json &onto = j.at("ontology");
    if (onto.is_string()) {
      c.ontology_paths.push_back(Resolve(base_dir, onto.get<std::string>()));
    } else {
      for (const json &p : onto) c.ontology_paths.push_back(Resolve(base_dir, p.get<std::string>()));
    }
    c.kb_path = Resolve(base_dir, j.at("kb").get<std::string>());
    c.escalation_dir = Resolve(base_dir, j.value("escalation_dir", "outbox/escalated"));
    c.report_dir = Resolve(base_dir, j.value("report_dir", "outbox/reports"));
    c.host = j.value("host", "127.0.0.1");
    c.port = j.value("port", 8080);
    c.audit = j.value("audit", true);

    if (c.max_edit < 0) throw ConfigError("max_edit must be non-negative");
    c.budget.Validate();
    if (!fs::exists(c.lexicon_path)) throw ConfigError("missing lexicon " + c.lexicon_path.string());
    if (c.ontology_paths.empty()) throw ConfigError("no ontology configured");
    for (const fs::path &p : c.ontology_paths) {
      if (!fs::exists(p)) throw ConfigError("missing ontology " + p.string());
    }
    return c;
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig RunConfig::Load(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception &e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return FromJson(j, fs::absolute(path).parent_path());
}

Pipeline::Pipeline(RunConfig config)
    : config_(std::move(config)),
      lexicon_(Lexicon::Load(config_.lexicon_path.string())) {
  std::vector<std::string> paths;
  for (const fs::path &p : config_.ontology_paths) paths.push_back(p.string());
  ontology_ = Ontology::LoadAll(paths);
  kb_ = std::make_unique<KnowledgeStore>(config_.kb_path);
  fs::create_directories(config_.escalation_dir);
  fs::create_directories(config_.report_dir);
}

AdjudicatorOptions Pipeline::options() const {
  AdjudicatorOptions o;
  o.max_edit = config_.max_edit;
  o.budget = config_.budget;
  return o;
}

Pipeline::Outcome Pipeline::Finish(Adjudication a, const ordered_json &bill_json) {
  Outcome out;
  ordered_json report = a.ToJson();
  out.report = CanonicalJson(report);
  if (config_.audit) out.audit_seq = kb_->AppendAudit({{"bill", bill_json}, {"adjudication", report}});
  const fs::path &dir =
      a.status == Status::kEscalated ? config_.escalation_dir : config_.report_dir;
  out.report_path = dir / ReportFileName(a.bill_id);
  WriteAtomically(out.report_path, out.report);
  out.adjudication = std::move(a);
  return out;
}

Pipeline::Outcome Pipeline::Run(const Bill &bill) {
  return Finish(Adjudicate(bill, *kb_, ontology_, lexicon_, options()), bill.ToJson());
}

Pipeline::Outcome Pipeline::RunDocument(std::string_view json_text,
                                        const std::string &fallback_id) {
  Bill bill;
  try {
    bill = Bill::Parse(json_text);
  } catch (const BillError &e) {
    Adjudication a;
    a.bill_id = fallback_id;
    a.status = Status::kEscalated;
    a.reason_code = e.code();
    a.reason_detail = e.what();
    a.trace.push_back({"escalate", a.reason_code + ": " + a.reason_detail});
    return Finish(std::move(a), ordered_json{{"raw_sha256", Sha256Hex(json_text)}});
  }
  return Run(bill);
}

ordered_json Pipeline::Health() const {
  bool kb_ok = fs::is_directory(config_.kb_path);
  ordered_json components = {{"lexicon", lexicon_.size() > 0},
                             {"ontology", !ontology_.axioms().empty()},
                             {"knowledge_base", kb_ok}};
  bool all = lexicon_.size() > 0 && !ontology_.axioms().empty() && kb_ok;
  return {{"status", all ? "ok" : "degraded"}, {"components", components}};
}

struct HttpService::Impl {
  Pipeline *pipeline;
  httplib::Server server;
};

namespace {
thread_local std::chrono::steady_clock::time_point request_start;
}  // namespace

HttpService::HttpService(Pipeline *pipeline) : impl_(std::make_unique<Impl>()) {
  impl_->pipeline = pipeline;
  httplib::Server &s = impl_->server;
  constexpr char kJson[] = "application/json";

  s.set_pre_routing_handler([](const httplib::Request &, httplib::Response &) {
    request_start = std::chrono::steady_clock::now();
    return httplib::Server::HandlerResponse::Unhandled;
  });
  s.set_post_routing_handler([](const httplib::Request &, httplib::Response &res) {
    auto elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - request_start);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", elapsed.count() / 1000.0);
    res.set_header("X-Elapsed-Ms", buf);
  });
  s.set_error_handler([kJson](const httplib::Request &, httplib::Response &res) {
    if (!res.body.empty()) return;
    std::string code = res.status == 404 ? "NOT_FOUND" : "HTTP_" + std::to_string(res.status);
    res.set_content(CanonicalJson(ErrorEnvelope(code, httplib::status_message(res.status))),
                    kJson);
  });

  s.Post("/v1/validate", [this, kJson](const httplib::Request &req, httplib::Response &res) {
    Bill bill;
    try {
      bill = Bill::Parse(req.body);
    } catch (const BillError &e) {
      res.status = 400;
      res.set_content(CanonicalJson(ErrorEnvelope(e.code(), e.what())), kJson);
      return;
    }
    try {
      Pipeline::Outcome out = impl_->pipeline->Run(bill);
      res.set_content(out.report, kJson);
    } catch (const std::exception &e) {
      res.status = 500;
      res.set_content(CanonicalJson(ErrorEnvelope("INTERNAL", e.what())), kJson);
    }
  });
  s.Get(R"(/v1/benchmarks/([^/]+)/([^/]+))",
        [this, kJson](const httplib::Request &req, httplib::Response &res) {
          std::optional<Benchmark> b =
              impl_->pipeline->kb().GetBenchmark(req.matches[1], req.matches[2]);
          if (!b) {
            res.status = 404;
            res.set_content(CanonicalJson(ErrorEnvelope(
                                "NOT_FOUND", "no benchmark " + std::string(req.matches[1]) +
                                                 "/" + std::string(req.matches[2]))),
                            kJson);
            return;
          }
          res.set_content(CanonicalJson(b->ToJson()), kJson);
        });
  s.Get("/v1/health", [this, kJson](const httplib::Request &, httplib::Response &res) {
    res.set_content(CanonicalJson(impl_->pipeline->Health()), kJson);
  });
}

HttpService::~HttpService() { Stop(); }

int HttpService::Bind(const std::string &host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpService::Listen() { return impl_->server.listen_after_bind(); }

void HttpService::Stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace claims
