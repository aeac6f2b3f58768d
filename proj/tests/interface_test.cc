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

#include <fstream>
#include <random>
#include <thread>

#include "claims/interface.h"
#include "doctest.h"
#include "fixtures.h"
#include "httplib.h"

namespace claims {
namespace {

namespace fs = std::filesystem;
using testing::DataPath;
using testing::ReadText;
using testing::TempDir;

nlohmann::json ConfigJson(const fs::path &root) {
  return {{"budget_ms", 500},
          {"lexicon", DataPath("lexicon.txt")},
          {"ontology",
           {DataPath("ontology/car_glass.onto"), DataPath("ontology/predator_prey.onto")}},
          {"kb", "kb"},
          {"escalation_dir", "out/escalated"},
          {"report_dir", "out/reports"},
          {"port", 0}};
}

RunConfig MakeConfig(const fs::path &root) {
  RunConfig c = RunConfig::FromJson(ConfigJson(root), root);
  testing::DemoWorld demo;
  KnowledgeStore kb(c.kb_path);
  demo.BuildKb(&kb);
  return c;
}

const std::vector<std::string> kFixtures = {"windscreen_exact", "windscreen_unmatched",
                                            "rear_window_group", "ten_lines", "unparseable"};

TEST_CASE("config loading") {
  TempDir dir;
  fs::path path = dir.path() / "config.json";
  std::ofstream(path) << ConfigJson(dir.path()).dump();
  RunConfig c = RunConfig::Load(path);
  CHECK(c.kb_path == dir.path() / "kb");
  CHECK(c.ontology_paths.size() == 2);
  CHECK(c.budget.max_duration == std::chrono::milliseconds(500));

  nlohmann::json bad = ConfigJson(dir.path());
  bad["budget_ms"] = 0;
  CHECK_THROWS_AS(RunConfig::FromJson(bad, dir.path()), ConfigError);
  bad = ConfigJson(dir.path());
  bad["lexicon"] = "missing.txt";
  CHECK_THROWS_AS(RunConfig::FromJson(bad, dir.path()), ConfigError);
  bad = ConfigJson(dir.path());
  bad.erase("kb");
  CHECK_THROWS_AS(RunConfig::FromJson(bad, dir.path()), ConfigError);
  CHECK_THROWS_AS(RunConfig::Load(dir.path() / "nope.json"), ConfigError);
}

TEST_CASE("report file names") {
  CHECK(ReportFileName("WS-0001") == "WS-0001.json");
  CHECK(ReportFileName("../etc/passwd") == "bill.._etc_passwd.json");
  CHECK(ReportFileName("") == "bill.json");
}

TEST_CASE("pipeline writes reports and audit records") {
  TempDir dir;
  Pipeline pipeline(MakeConfig(dir.path()));
  Pipeline::Outcome ok =
      pipeline.Run(Bill::Parse(ReadText(DataPath("fixtures/windscreen_unmatched.json"))));
  CHECK(ok.adjudication.status == Status::kAutoReduced);
  CHECK(ok.report_path == dir.path() / "out/reports/WS-0002.json");
  CHECK(ReadText(ok.report_path) == ok.report);
  CHECK(ok.audit_seq == 1);

  Pipeline::Outcome esc = pipeline.RunDocument("{\"id\": ", "broken");
  CHECK(esc.adjudication.reason_code == "MALFORMED_BILL");
  CHECK(esc.report_path == dir.path() / "out/escalated/broken.json");
  CHECK(pipeline.kb().VerifyChain());
  CHECK(pipeline.kb().AuditLog().size() == 2);
  CHECK(pipeline.Health()["status"] == "ok");
}

struct RunningService {
  Pipeline *pipeline;
  HttpService service{pipeline};
  int port = service.Bind("127.0.0.1", 0);
  std::thread thread{[this] { service.Listen(); }};

  explicit RunningService(Pipeline *p) : pipeline(p) {}
  ~RunningService() {
    service.Stop();
    thread.join();
  }
};

TEST_CASE("http service") {
  TempDir dir;
  Pipeline pipeline(MakeConfig(dir.path()));
  RunningService running(&pipeline);
  REQUIRE(running.port > 0);
  httplib::Client client("127.0.0.1", running.port);
  client.set_read_timeout(30, 0);

  auto health = client.Get("/v1/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->has_header("X-Elapsed-Ms"));
  CHECK(nlohmann::json::parse(health->body)["components"]["lexicon"] == true);

  std::string bill = ReadText(DataPath("fixtures/windscreen_exact.json"));
  auto res = client.Post("/v1/validate", bill, "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->has_header("X-Elapsed-Ms"));
  // Same bytes as the report written for the CLI.
  TempDir other;
  Pipeline cli(MakeConfig(other.path()));
  CHECK(res->body == cli.Run(Bill::Parse(bill)).report);

  auto bad = client.Post("/v1/validate", "{\"id\": 3", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  CHECK(nlohmann::json::parse(bad->body)["error"]["code"] == "MALFORMED_BILL");

  auto bench = client.Get("/v1/benchmarks/car-glass/rear-window");
  REQUIRE(bench);
  CHECK(bench->status == 200);
  CHECK(Benchmark::FromJson(nlohmann::json::parse(bench->body)) ==
        *pipeline.kb().GetBenchmark("car-glass", "rear-window"));
  auto missing = client.Get("/v1/benchmarks/car-glass/sunroof");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(nlohmann::json::parse(missing->body)["error"]["code"] == "NOT_FOUND");
  auto nowhere = client.Get("/v2/nothing");
  REQUIRE(nowhere);
  CHECK(nowhere->status == 404);
  CHECK(nlohmann::json::parse(nowhere->body).contains("error"));
}

TEST_CASE("concurrent requests do not share state") {
  TempDir dir;
  Pipeline pipeline(MakeConfig(dir.path()));
  std::map<std::string, std::string> expected;
  for (const std::string &name : kFixtures) {
    std::string body = ReadText(DataPath("fixtures/" + name + ".json"));
    expected[body] = CanonicalJson(Adjudicate(Bill::Parse(body), pipeline.kb(),
                                              pipeline.ontology(), pipeline.lexicon(),
                                              pipeline.options())
                                       .ToJson());
  }
  RunningService running(&pipeline);
  REQUIRE(running.port > 0);
  std::vector<std::thread> clients;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    clients.emplace_back([&, t] {
      std::mt19937 rng(t);
      httplib::Client client("127.0.0.1", running.port);
      client.set_read_timeout(30, 0);
      for (int i = 0; i < 6; ++i) {
        auto it = std::next(expected.begin(), rng() % expected.size());
        auto res = client.Post("/v1/validate", it->first, "application/json");
        if (!res || res->status != 200 || res->body != it->second) ++mismatches;
      }
    });
  }
  for (std::thread &c : clients) c.join();
  CHECK(mismatches == 0);
  CHECK(pipeline.kb().AuditLog().size() == 24);
  CHECK(pipeline.kb().VerifyChain());
}

}  // namespace
}  // namespace claims
