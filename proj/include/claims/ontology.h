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

#ifndef CLAIMS_ONTOLOGY_H_
#define CLAIMS_ONTOLOGY_H_

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "claims/clause.h"
#include "claims/formula.h"
#include "claims/prover.h"

namespace claims {

class OntologyError : public std::runtime_error {
 public:
  enum class Kind { kParse, kCycle, kDuplicateName, kInvariant, kIo };

  OntologyError(Kind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// (doc_type, subtype) scope of an axiom. An empty doc_type is the wildcard
// "*"; subtype "*" covers every subtype of the doc type.
struct AxiomContext {
  std::string doc_type;
  std::string subtype;

  bool is_wildcard() const { return doc_type.empty(); }
  std::string ToString() const;
  static AxiomContext Parse(std::string_view text);

  bool operator==(const AxiomContext &) const = default;
};

enum class AxiomKind {
  kBackground,
  // Classification target for documents of the axiom's context.
  kClassify,
};

struct OntologyAxiom {
  std::string name;
  AxiomContext context;
  AxiomKind kind = AxiomKind::kBackground;
  Formula formula = Formula::Pred("true", {});
  std::string provenance;
};

enum class SynonymLevel { kWord, kPhrase };

struct Synonym {
  std::string a;
  std::string b;
  SynonymLevel level = SynonymLevel::kWord;
};

struct Taxonomy {
  // child -> parents
  std::map<std::string, std::set<std::string>> is_a;
  // part -> wholes
  std::map<std::string, std::set<std::string>> part_of;

  std::set<std::string> Nodes() const;
  std::optional<std::string> Root() const;
  // Reflexive-transitive is_a ancestors.
  std::set<std::string> Ancestors(const std::string &node) const;
};

class Ontology {
 public:
  Ontology() = default;

  static Ontology Load(const std::string &path);
  // Loads several files into one ontology; duplicate edges merge, duplicate
  // axiom names are an error.
  static Ontology LoadAll(const std::vector<std::string> &paths);
  static Ontology Parse(std::string_view text, const std::string &source = "<text>");

  const std::vector<OntologyAxiom> &axioms() const { return axioms_; }
  const Taxonomy &taxonomy() const { return taxonomy_; }
  const std::vector<Synonym> &synonyms() const { return synonyms_; }
  const std::set<std::string> &externs() const { return externs_; }

  // Background axioms whose context matches, plus taxonomy-closure and
  // word-synonym axioms (always included).
  std::vector<OntologyAxiom> SelectContext(const std::string &doc_type,
                                           const std::string &subtype) const;
  // Every background axiom regardless of context, plus closure axioms.
  std::vector<OntologyAxiom> AllBackground() const;
  std::vector<OntologyAxiom> ClassificationAxioms() const;

  // Clause form of the axioms; Skolem functions are allowed.
  static std::vector<Clause> ToClauses(const std::vector<OntologyAxiom> &axioms);

  // True if a and b are listed as synonyms at the given level (symmetric).
  bool AreSynonyms(const std::string &a, const std::string &b, SynonymLevel level) const;

  // Rewrites every phrase-level variant occurring in `text` (whole words,
  // case-insensitive) to its canonical phrase, the second member of its syn
  // line, following chains. Text without matches is returned unchanged.
  std::string RewritePhrases(std::string_view text) const;

  // Wholes of which `predicate` is a part (direct part_of edges).
  std::set<std::string> WholesOf(const std::string &predicate) const;

 private:
  void ParseInto(std::string_view text, const std::string &source);
  void Validate() const;
  std::vector<OntologyAxiom> ClosureAxioms() const;

  std::vector<OntologyAxiom> axioms_;
  Taxonomy taxonomy_;
  std::vector<Synonym> synonyms_;
  std::set<std::string> externs_;
};

struct ConsistencyResult {
  enum class Verdict { kConsistent, kInconsistent, kUnknown };
  Verdict verdict = Verdict::kUnknown;
  // Minimal inconsistent subset (axiom names) when inconsistent.
  std::vector<std::string> core;
};

ConsistencyResult CheckConsistency(const std::vector<OntologyAxiom> &axioms,
                                   const Budget &budget);

}  // namespace claims

#endif  // CLAIMS_ONTOLOGY_H_
