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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "bill_corpus.h"
#include "claims/adjudicator.h"
#include "claims/formula.h"
#include "claims/interface.h"
#include "claims/lowering.h"
#include "claims/matcher.h"
#include "claims/prover.h"
#include "claims/text_to_gamma.h"
#include "fixtures.h"
#include "oracles.h"
#include "random_clauses.h"
#include "random_graphs.h"

namespace claims {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using testing::DataPath;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

CommandResult RunCommand(const std::string &command) {
  CommandResult r;
  FILE *pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// A config and compiled knowledge base in a scratch directory.
struct Workspace {
  testing::TempDir dir;
  fs::path config_path = dir.path() / "config.json";

  Workspace() {
    nlohmann::json config = {
        {"budget_ms", 500},
        {"lexicon", DataPath("lexicon.txt")},
        {"ontology",
         {DataPath("ontology/car_glass.onto"), DataPath("ontology/predator_prey.onto")}},
        {"kb", "kb"},
        {"escalation_dir", "outbox/escalated"},
        {"report_dir", "outbox/reports"}};
    std::ofstream(config_path) << config.dump(2);
    testing::DemoWorld demo;
    KnowledgeStore kb(dir.path() / "kb");
    demo.BuildKb(&kb);
  }
};

std::string Quote(const std::string &s) { return "'" + s + "'"; }

Outcome GoldenParse() {
  Workspace ws;
  fs::path text = ws.dir.path() / "sentence.txt";
  std::ofstream(text) << "John's father did not return. Now John is searching for him.\n";
  auto start = Clock::now();
  CommandResult r = RunCommand(Quote(CLAIMS_CLI) + " parse " + Quote(text.string()) +
                               " --config " + Quote(ws.config_path.string()));
  double elapsed = Seconds(start);
  const std::string want =
      "father(x1) and john(x2) and mod(x1,x2) and not return_p(x1) and searches_i(x2,x1)\n";
  bool ok = r.exit_code == 0 && r.out == want && elapsed < 1.0;
  std::ostringstream d;
  d << "exit " << r.exit_code << ", " << (r.out == want ? "exact match" : "got: " + r.out)
    << ", " << elapsed << " s";
  return {ok, d.str()};
}

Outcome ScopeAmbiguity() {
  Lexicon lexicon = Lexicon::Load(DataPath("lexicon.txt"));
  auto start = Clock::now();
  GammaResult r = TextToGamma("Every man loves one woman.", lexicon, nullptr);
  if (r.readings.size() != 2) {
    return {false, std::to_string(r.readings.size()) + " readings"};
  }
  const Formula &de_dicto = r.readings[0];
  const Formula &de_re = r.readings[1];
  bool order = Render(de_dicto).rfind("forall", 0) == 0 && Render(de_re).rfind("exists", 0) == 0;
  Budget budget;
  budget.max_duration = std::chrono::seconds(2);
  SkolemCounter c1;
  SkolemCounter c2;
  ProofResult forward = Entails(ClausifyWithFunctions(de_re, &c1), de_dicto, budget);
  ProofResult backward = Entails(ClausifyWithFunctions(de_dicto, &c2), de_re, budget);
  double elapsed = Seconds(start);
  bool ok = order && forward.verdict == claims::Verdict::kProved &&
            backward.verdict == claims::Verdict::kRefuted && elapsed < 2.0;
  std::ostringstream d;
  d << "2 readings" << (order ? ", de dicto first" : ", wrong order") << ", de re |- de dicto "
    << VerdictName(forward.verdict) << ", de dicto |- de re " << VerdictName(backward.verdict)
    << ", " << elapsed << " s";
  return {ok, d.str()};
}

Outcome Anaphora() {
  Lexicon lexicon = Lexicon::Load(DataPath("lexicon.txt"));
  Ontology predator_prey = Ontology::Load(DataPath("ontology/predator_prey.onto"));
  auto resolve = [&](const std::string &adjective) {
    GammaResult r = TextToGamma("The cat caught the mouse because it was " + adjective + ".",
                                lexicon, &predator_prey);
    if (!r.ok() || r.readings.size() != 1) return std::string("unresolved");
    std::string s = Render(r.readings[0]);
    if (s.find(adjective + "(x2)") != std::string::npos) return std::string("mouse");
    if (s.find(adjective + "(x1)") != std::string::npos) return std::string("cat");
    return std::string("unresolved");
  };
  std::string slow = resolve("slow");
  std::string quick = resolve("quick");
  bool ok = slow == "mouse" && quick == "cat";
  return {ok, "slow -> " + slow + ", quick -> " + quick};
}

Outcome ProverOracle() {
  std::mt19937 rng(20260101);
  int disagreements = 0;
  int timeouts = 0;
  int proved = 0;
  constexpr int kTrials = 1000;
  Budget budget;
  budget.max_duration = std::chrono::milliseconds(500);
  auto start = Clock::now();
  for (int trial = 0; trial < kTrials; ++trial) {
    testing::RandomProblem prob = testing::MakeRandomProblem(&rng);
    std::vector<Clause> all = prob.delta;
    all.push_back(prob.negated_goal);
    bool entailed = !oracle::HerbrandSatisfiable(all);
    ProofResult r = Entails(prob.delta, prob.goal, budget);
    if (r.verdict == claims::Verdict::kTimeout) {
      ++timeouts;
      continue;
    }
    if (r.verdict == claims::Verdict::kProved) ++proved;
    if ((r.verdict == claims::Verdict::kProved) != entailed) ++disagreements;
  }
  double elapsed = Seconds(start);
  double timeout_rate = static_cast<double>(timeouts) / kTrials;
  bool ok = disagreements == 0 && timeout_rate < 0.05 && elapsed < 300;
  std::ostringstream d;
  d << kTrials << " problems (" << proved << " entailed), " << disagreements << " disagreements, timeout rate "
    << timeout_rate * 100 << "%, " << elapsed << " s";
  return {ok, d.str()};
}

Outcome MatcherOptimality() {
  std::mt19937 rng(5150);
  int wrong = 0;
  constexpr int kTrials = 500;
  auto start = Clock::now();
  for (int trial = 0; trial < kTrials; ++trial) {
    testing::RandomGraph rg = testing::MakeRandomGraph(&rng, 6, 6);
    Assignment a = SolveAssignment(rg.graph);
    if (a.total_score * Rational(5) != Rational(oracle::BruteForceAssignment(rg.weights))) {
      ++wrong;
    }
  }
  double elapsed = Seconds(start);
  std::ostringstream d;
  d << kTrials << " graphs, " << wrong << " suboptimal, " << elapsed << " s";
  return {wrong == 0 && elapsed < 30, d.str()};
}

struct CorpusRun {
  std::vector<testing::CorpusBill> bills;
  std::vector<Adjudication> results;
};

const CorpusRun &MainCorpus() {
  static CorpusRun run = [] {
    CorpusRun r;
    Workspace ws;
    testing::DemoWorld demo;
    KnowledgeStore kb(ws.dir.path() / "kb");
    r.bills = testing::BillCorpus().Generate(6, 200, 0.4);
    for (const testing::CorpusBill &b : r.bills) {
      r.results.push_back(
          AdjudicateDocument(b.document, kb, demo.ontology, demo.lexicon, demo.options));
    }
    return r;
  }();
  return run;
}

Outcome EndToEndExactness() {
  const CorpusRun &run = MainCorpus();
  int clean = 0;
  int exact = 0;
  int corrupted = 0;
  int escalated = 0;
  std::string first_miss;
  for (size_t i = 0; i < run.bills.size(); ++i) {
    const testing::CorpusBill &b = run.bills[i];
    const Adjudication &a = run.results[i];
    if (b.corruption != testing::Corruption::kNone) {
      ++corrupted;
      if (a.status == Status::kEscalated) ++escalated;
      continue;
    }
    ++clean;
    std::map<int, int64_t> got;
    for (const Deduction &d : a.deductions) got[d.line] += d.amount;
    if (a.status != Status::kEscalated && a.approved == b.approved && got == b.deductions) {
      ++exact;
    } else if (first_miss.empty()) {
      first_miss = a.bill_id + " " + StatusName(a.status) + " " + a.reason_code;
    }
  }
  double rate = clean == 0 ? 0 : static_cast<double>(exact) / clean;
  bool ok = rate >= 0.9 && escalated == corrupted;
  std::ostringstream d;
  d << exact << "/" << clean << " clean bills exact, " << escalated << "/" << corrupted
    << " corrupted bills escalated";
  if (!first_miss.empty()) d << ", first miss " << first_miss;
  return {ok, d.str()};
}

Outcome Conservation() {
  const CorpusRun &run = MainCorpus();
  int checked = 0;
  int broken = 0;
  for (const Adjudication &a : run.results) {
    if (a.status == Status::kEscalated) {
      if (a.approved.has_value() || !a.deductions.empty()) ++broken;
      continue;
    }
    ++checked;
    if (*a.approved + a.DeductionTotal() != a.total) ++broken;
  }
  return {broken == 0, std::to_string(checked) + " decisions balanced, " +
                           std::to_string(broken) + " violations"};
}

Outcome Latency() {
  Workspace ws;
  std::string command = Quote(CLAIMS_CLI) + " validate --bill " +
                        Quote(DataPath("fixtures/ten_lines.json")) + " --config " +
                        Quote(ws.config_path.string()) + " > /dev/null";
  std::vector<double> times;
  int failures = 0;
  for (int i = 0; i < 50; ++i) {
    auto start = Clock::now();
    CommandResult r = RunCommand(command);
    times.push_back(Seconds(start));
    if (r.exit_code != 0) ++failures;
  }
  std::sort(times.begin(), times.end());
  double p95 = times[static_cast<size_t>(0.95 * times.size()) - 1];
  std::ostringstream d;
  d << "p95 " << p95 << " s over 50 runs, median " << times[25] << " s";
  if (failures > 0) d << ", " << failures << " runs failed";
  return {p95 < 1.0 && failures == 0, d.str()};
}

Outcome Robustness() {
  static const std::set<std::string> kReasons = {
      "MALFORMED_BILL", "INVALID_BILL", "TOTAL_MISMATCH",   "UNKNOWN_TOKEN",
      "UNPARSEABLE",    "AMBIGUOUS",    "LOWERING_ERROR",   "UNCLASSIFIED",
      "NOT_FOUND",      "TIMEOUT",      "INCOMPLETE_MATCH"};
  Workspace ws;
  testing::DemoWorld demo;
  KnowledgeStore kb(ws.dir.path() / "kb");
  testing::BillCorpus corpus;
  std::vector<testing::CorpusBill> bills =
      corpus.Generate(9, 200, 1.0, testing::Corruption::kScrambled);
  for (testing::CorpusBill &b : corpus.Generate(9, 200, 1.0, testing::Corruption::kTruncated)) {
    bills.push_back(std::move(b));
  }
  int auto_verdicts = 0;
  int unexplained = 0;
  auto check = [&](const Adjudication &a, bool must_escalate) {
    if (a.status == Status::kEscalated) {
      if (kReasons.count(a.reason_code) == 0) ++unexplained;
    } else if (must_escalate) {
      ++auto_verdicts;
    }
  };
  for (const testing::CorpusBill &b : bills) {
    check(AdjudicateDocument(b.document, kb, demo.ontology, demo.lexicon, demo.options), true);
  }
  const CorpusRun &run = MainCorpus();
  for (size_t i = 0; i < run.bills.size(); ++i) {
    check(run.results[i], run.bills[i].corruption != testing::Corruption::kNone);
  }
  std::ostringstream d;
  d << bills.size() << " scrambled/truncated bills plus " << run.bills.size()
    << " corpus bills: " << auto_verdicts << " wrongly automatic, " << unexplained
    << " escalations without a known reason";
  return {auto_verdicts == 0 && unexplained == 0, d.str()};
}

Outcome AuditIntegrity() {
  Workspace ws;
  Pipeline pipeline(RunConfig::Load(ws.config_path));
  std::vector<testing::CorpusBill> bills = testing::BillCorpus().Generate(10, 100, 0.3);
  for (const testing::CorpusBill &b : bills) pipeline.RunDocument(b.document, "bill");
  KnowledgeStore &kb = pipeline.kb();
  if (kb.AuditLog().size() != 100 || !kb.VerifyChain()) {
    return {false, "chain did not verify after 100 adjudications"};
  }
  std::mt19937 rng(10);
  auto start = Clock::now();
  uintmax_t audit_bytes = 0;
  int flips = 0;
  int undetected = 0;
  auto flip = [&](const fs::path &record, size_t offset) {
    std::string original = testing::ReadText(record);
    std::string tampered = original;
    tampered[offset] = static_cast<char>(tampered[offset] ^ (1 + rng() % 255));
    std::ofstream(record, std::ios::binary | std::ios::trunc) << tampered;
    ++flips;
    if (kb.VerifyChain()) ++undetected;
    std::ofstream(record, std::ios::binary | std::ios::trunc) << original;
  };
  // Every byte of the first record, sampled bytes of the others.
  for (int seq = 1; seq <= 100; ++seq) {
    char name[32];
    std::snprintf(name, sizeof(name), "audit/%08d.json", seq);
    fs::path record = ws.dir.path() / "kb" / name;
    size_t size = fs::file_size(record);
    audit_bytes += size;
    if (seq == 1) {
      for (size_t offset = 0; offset < size; ++offset) flip(record, offset);
    } else {
      flip(record, 0);
      flip(record, size - 1);
      for (int k = 0; k < 62; ++k) flip(record, rng() % size);
    }
  }
  bool restored = kb.VerifyChain();
  std::ostringstream d;
  d << "100 records (" << audit_bytes << " bytes) verified, " << flips << " byte flips, "
    << undetected << " undetected, " << Seconds(start) << " s";
  return {undetected == 0 && restored, d.str()};
}

}  // namespace
}  // namespace claims

int main() {
  using claims::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"golden parse", claims::GoldenParse},
      {"scope ambiguity", claims::ScopeAmbiguity},
      {"anaphora", claims::Anaphora},
      {"prover vs Herbrand oracle", claims::ProverOracle},
      {"matcher optimality", claims::MatcherOptimality},
      {"end-to-end exactness", claims::EndToEndExactness},
      {"conservation", claims::Conservation},
      {"CLI latency", claims::Latency},
      {"robustness", claims::Robustness},
      {"audit integrity", claims::AuditIntegrity},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome v;
    try {
      v = criteria[i].second();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " ("
              << criteria[i].first << "): " << v.detail << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
