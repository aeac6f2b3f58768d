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

// Shared test fixtures: a temporary directory and the demo knowledge base.

#ifndef CLAIMS_TESTS_FIXTURES_H_
#define CLAIMS_TESTS_FIXTURES_H_

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "claims/adjudicator.h"
#include "claims/knowledge_store.h"
#include "claims/lexicon.h"
#include "claims/ontology.h"

namespace claims::testing {

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "claims-XXXXXX").string();
    path_ = ::mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string ReadText(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::string DataPath(const std::string &relative) {
  return std::string(CLAIMS_DATA_DIR) + "/" + relative;
}

// Lexicon and merged ontologies shipped in data/.
struct DemoWorld {
  Lexicon lexicon = Lexicon::Load(DataPath("lexicon.txt"));
  Ontology ontology = Ontology::LoadAll(
      {DataPath("ontology/car_glass.onto"), DataPath("ontology/predator_prey.onto")});
  AdjudicatorOptions options;

  // Compiles data/benchmarks/*.json into a store at `root`.
  void BuildKb(KnowledgeStore *kb) const {
    for (const char *name : {"windscreen", "rear_window", "side_window"}) {
      nlohmann::json source =
          nlohmann::json::parse(ReadText(DataPath(std::string("benchmarks/") + name + ".json")));
      kb->PutBenchmark(CompileBenchmark(source, lexicon, ontology, options));
    }
  }
};

}  // namespace claims::testing

#endif  // CLAIMS_TESTS_FIXTURES_H_
