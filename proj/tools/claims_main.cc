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

// `claims`: command-line front end.
//
//   claims parse <file>                      Gamma readings, one per line
//   claims lower <file>                      Delta of each reading
//   claims prove --goal <f> --axioms <f> --budget-ms N
//   claims validate --bill <f> --config <f>
//   claims batch --dir <d> --config <f>
//   claims serve --config <f>
//   claims kb put <source.json>... --config <f> [--replace]
//   claims kb verify --config <f>
//
// Exit codes: 0 success, 2 for unparseable/ambiguous text, an escalated
// bill, a failed proof or a broken audit chain, 1 for usage and I/O errors.

#include <algorithm>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "claims/adjudicator.h"
#include "claims/formula.h"
#include "claims/interface.h"
#include "claims/lowering.h"
#include "claims/prover.h"
#include "claims/text_to_gamma.h"

namespace claims {
namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kUndecided = 2;

std::string ReadFileOrThrow(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct TextResult {
  GammaResult gamma;
  int exit_code = kOk;
};

TextResult ParseText(const std::string &file, const std::string &config_path) {
  RunConfig config = RunConfig::Load(config_path);
  Lexicon lexicon = Lexicon::Load(config.lexicon_path.string());
  std::vector<std::string> paths;
  for (const fs::path &p : config.ontology_paths) paths.push_back(p.string());
  Ontology ontology = Ontology::LoadAll(paths);
  GammaOptions options;
  options.max_edit = config.max_edit;
  options.budget = config.budget;
  TextResult r;
  r.gamma = TextToGamma(ReadFileOrThrow(file), lexicon, &ontology, options);
  if (r.gamma.unknown_token) std::cerr << r.gamma.unknown_token->what() << "\n";
  for (const std::string &flag : r.gamma.context.flags) std::cerr << "flag: " << flag << "\n";
  if (!r.gamma.ok()) r.exit_code = kUndecided;
  return r;
}

int RunParse(const std::string &file, const std::string &config) {
  TextResult r = ParseText(file, config);
  for (const Formula &reading : r.gamma.readings) std::cout << Render(reading) << "\n";
  return r.exit_code;
}

int RunLower(const std::string &file, const std::string &config) {
  TextResult r = ParseText(file, config);
  if (r.exit_code != kOk) return r.exit_code;
  int exit_code = kOk;
  for (size_t i = 0; i < r.gamma.readings.size(); ++i) {
    if (r.gamma.readings.size() > 1) std::cout << "# reading " << i + 1 << "\n";
    try {
      std::cout << Lower(r.gamma.readings[i], r.gamma.context).Serialize();
    } catch (const LoweringError &e) {
      std::cout << "# not lowerable: " << e.what() << "\n";
      exit_code = kUndecided;
    }
  }
  return exit_code;
}

// Axiom files hold either a serialized Delta (starting with a section
// header) or one formula per line; `#` starts a comment line.
std::vector<Clause> ReadAxioms(const std::string &path) {
  std::string text = ReadFileOrThrow(path);
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    DeltaSet d = DeltaSet::Parse(text);
    std::vector<Clause> out = d.fol;
    out.insert(out.end(), d.modal.begin(), d.modal.end());
    return out;
  }
  std::vector<Clause> out;
  SkolemCounter counter;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    for (Clause &c : ClausifyWithFunctions(ParseFormula(line), &counter)) out.push_back(c);
  }
  return out;
}

int RunProve(const std::string &goal_file, const std::string &axioms_file, int budget_ms,
             bool show_proof) {
  Budget budget;
  budget.max_duration = std::chrono::milliseconds(budget_ms);
  budget.Validate();
  std::string goal_text = ReadFileOrThrow(goal_file);
  while (!goal_text.empty() && std::isspace(static_cast<unsigned char>(goal_text.back()))) {
    goal_text.pop_back();
  }
  ProofResult r = Entails(ReadAxioms(axioms_file), ParseFormula(goal_text), budget);
  std::cout << VerdictName(r.verdict) << "\n";
  if (show_proof && r.proof) std::cout << SerializeProof(*r.proof);
  return r.verdict == Verdict::kProved ? kOk : kUndecided;
}

int RunValidate(const std::string &bill_file, const std::string &config_path) {
  std::string text = ReadFileOrThrow(bill_file);
  Bill bill;
  try {
    bill = Bill::Parse(text);
  } catch (const BillError &e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return kError;
  }
  Pipeline pipeline(RunConfig::Load(config_path));
  Pipeline::Outcome out = pipeline.Run(bill);
  const Adjudication &a = out.adjudication;
  std::cout << StatusName(a.status);
  if (a.status == Status::kEscalated) {
    std::cout << " " << a.reason_code;
  } else {
    std::cout << " approved=" << *a.approved << " deducted=" << a.DeductionTotal();
  }
  std::cout << " report=" << out.report_path.string() << "\n";
  return a.status == Status::kEscalated ? kUndecided : kOk;
}

int RunBatch(const std::string &dir, const std::string &config_path) {
  Pipeline pipeline(RunConfig::Load(config_path));
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  int escalated = 0;
  for (const fs::path &f : files) {
    Pipeline::Outcome out =
        pipeline.RunDocument(ReadFileOrThrow(f.string()), f.stem().string());
    const Adjudication &a = out.adjudication;
    std::cout << f.filename().string() << " " << StatusName(a.status);
    if (a.status == Status::kEscalated) {
      std::cout << " " << a.reason_code;
      ++escalated;
    } else {
      std::cout << " approved=" << *a.approved;
    }
    std::cout << "\n";
  }
  std::cout << files.size() << " bills, " << escalated << " escalated\n";
  return kOk;
}

HttpService *active_service = nullptr;

void StopService(int) {
  if (active_service != nullptr) active_service->Stop();
}

int RunServe(const std::string &config_path, int port_override) {
  RunConfig config = RunConfig::Load(config_path);
  if (port_override >= 0) config.port = port_override;
  Pipeline pipeline(config);
  HttpService service(&pipeline);
  int port = service.Bind(config.host, config.port);
  if (port < 0) {
    std::cerr << "cannot bind " << config.host << ":" << config.port << "\n";
    return kError;
  }
  active_service = &service;
  std::signal(SIGINT, StopService);
  std::signal(SIGTERM, StopService);
  std::cout << "listening on http://" << config.host << ":" << port << std::endl;
  bool ok = service.Listen();
  active_service = nullptr;
  return ok ? kOk : kError;
}

int RunKbPut(const std::vector<std::string> &sources, const std::string &config_path,
             bool replace) {
  RunConfig config = RunConfig::Load(config_path);
  Pipeline pipeline(config);
  for (const std::string &path : sources) {
    nlohmann::json source = nlohmann::json::parse(ReadFileOrThrow(path));
    Benchmark b = CompileBenchmark(source, pipeline.lexicon(), pipeline.ontology(),
                                   pipeline.options());
    if (replace) {
      pipeline.kb().ReplaceBenchmark(b);
    } else {
      pipeline.kb().PutBenchmark(b);
    }
    std::cout << "stored " << b.id() << " (" << b.lines.size() << " lines)\n";
  }
  return kOk;
}

int RunKbVerify(const std::string &config_path) {
  KnowledgeStore kb(RunConfig::Load(config_path).kb_path);
  bool ok = kb.VerifyChain();
  std::cout << (ok ? "chain ok" : "chain BROKEN") << " (" << (ok ? kb.AuditLog().size() : 0)
            << " records)\n";
  return ok ? kOk : kUndecided;
}

int Main(int argc, char **argv) {
  CLI::App app{"Claims validation: text to logic, proofs and bill adjudication"};
  app.require_subcommand(1);
  std::string config = CLAIMS_DEFAULT_CONFIG;
  std::function<int()> action;

  std::string text_file;
  auto *parse = app.add_subcommand("parse", "Print the Gamma readings of a text file");
  parse->add_option("file", text_file, "Text file")->required();
  parse->add_option("--config", config, "Run configuration");
  parse->callback([&] { action = [&] { return RunParse(text_file, config); }; });

  auto *lower = app.add_subcommand("lower", "Print the Delta of each reading");
  lower->add_option("file", text_file, "Text file")->required();
  lower->add_option("--config", config, "Run configuration");
  lower->callback([&] { action = [&] { return RunLower(text_file, config); }; });

  std::string goal;
  std::string axioms;
  int budget_ms = 500;
  bool show_proof = false;
  auto *prove = app.add_subcommand("prove", "Decide whether the axioms entail the goal");
  prove->add_option("--goal", goal, "File holding one formula")->required();
  prove->add_option("--axioms", axioms, "Delta file or one formula per line")->required();
  prove->add_option("--budget-ms", budget_ms, "Proof search time limit");
  prove->add_flag("--proof", show_proof, "Print the refutation");
  prove->callback([&] { action = [&] { return RunProve(goal, axioms, budget_ms, show_proof); }; });

  std::string bill;
  auto *validate = app.add_subcommand("validate", "Adjudicate one bill");
  validate->add_option("--bill", bill, "Bill JSON")->required();
  validate->add_option("--config", config, "Run configuration");
  validate->callback([&] { action = [&] { return RunValidate(bill, config); }; });

  std::string dir;
  auto *batch = app.add_subcommand("batch", "Adjudicate every *.json bill in a directory");
  batch->add_option("--dir", dir, "Directory of bills")->required();
  batch->add_option("--config", config, "Run configuration");
  batch->callback([&] { action = [&] { return RunBatch(dir, config); }; });

  int port = -1;
  auto *serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config, "Run configuration");
  serve->add_option("--port", port, "Override the configured port");
  serve->callback([&] { action = [&] { return RunServe(config, port); }; });

  auto *kb = app.add_subcommand("kb", "Knowledge base maintenance");
  kb->require_subcommand(1);
  std::vector<std::string> sources;
  bool replace = false;
  auto *put = kb->add_subcommand("put", "Compile benchmark sources and store them");
  put->add_option("sources", sources, "Benchmark source JSON files")->required();
  put->add_option("--config", config, "Run configuration");
  put->add_flag("--replace", replace, "Overwrite existing benchmarks");
  put->callback([&] { action = [&] { return RunKbPut(sources, config, replace); }; });
  auto *verify = kb->add_subcommand("verify", "Check the audit hash chain");
  verify->add_option("--config", config, "Run configuration");
  verify->callback([&] { action = [&] { return RunKbVerify(config); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kOk : kError;
  }
  try {
    return action ? action() : kError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace
}  // namespace claims

int main(int argc, char **argv) { return claims::Main(argc, argv); }
