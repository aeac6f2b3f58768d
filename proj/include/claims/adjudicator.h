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

// Bill adjudication: vectorize, classify, retrieve a benchmark, match,
// deduct and justify. Anything that cannot be decided is escalated.

#ifndef CLAIMS_ADJUDICATOR_H_
#define CLAIMS_ADJUDICATOR_H_

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "claims/clause.h"
#include "claims/knowledge_store.h"
#include "claims/lexicon.h"
#include "claims/matcher.h"
#include "claims/ontology.h"
#include "claims/prover.h"
#include "claims/rational.h"
#include "json.hpp"

namespace claims {

// Thrown by Bill::FromJson and Bill::Validate.
class BillError : public std::runtime_error {
 public:
  BillError(std::string code, const std::string &message)
      : std::runtime_error(message), code_(std::move(code)) {}
  // Escalation reason code: MALFORMED_BILL, INVALID_BILL or TOTAL_MISMATCH.
  const std::string &code() const { return code_; }

 private:
  std::string code_;
};

struct BillLine {
  int pos = 0;
  std::string text;
  Rational quantity;
  int64_t unit_price = 0;  // minor units
  int64_t line_total = 0;  // minor units
};

struct Bill {
  std::string id;
  std::string date;
  std::vector<BillLine> lines;
  std::optional<std::string> free_text;

  int64_t Total() const;
  // Throws BillError for an empty id, no lines, duplicate or non-positive
  // positions, negative amounts, or line_total != round(quantity x
  // unit_price).
  void Validate() const;

  // Reads `{id, date, lines:[{pos, text, qty, unit_price_minor,
  // total_minor}], free_text?}`. qty may be a number or a decimal/fraction
  // string. Does not call Validate().
  static Bill FromJson(const nlohmann::json &j);
  static Bill Parse(std::string_view json_text);
  nlohmann::ordered_json ToJson() const;
};

struct AdjudicatorOptions {
  int max_edit = 1;
  Budget budget;
};

// Result of compiling one line of item text.
struct LineCompilation {
  std::optional<DeltaSet> delta;
  // Set when the line could not be compiled: UNKNOWN_TOKEN, UNPARSEABLE,
  // AMBIGUOUS or LOWERING_ERROR.
  std::string error_code;
  std::string error_detail;
  std::string rewritten_text;
};

// Phrase rewriting, item parse and lowering of a single line.
LineCompilation CompileLine(const std::string &text, const Lexicon &lexicon,
                            const Ontology &ontology, const AdjudicatorOptions &options);

// Builds a benchmark from authoring JSON whose lines carry `text` but no
// `delta`. Throws StoreError(kInvalid) if a line does not compile.
Benchmark CompileBenchmark(const nlohmann::json &source, const Lexicon &lexicon,
                           const Ontology &ontology, const AdjudicatorOptions &options);

struct BillVector {
  // Indexed like Bill::lines.
  std::vector<std::optional<DeltaSet>> logical;
  std::vector<BillLine> quantitative;
  std::set<std::string> doc_features;
  // "line <pos>: <detail>" for every line that failed to compile.
  std::vector<std::string> marks;
  std::vector<std::string> mark_codes;
};

BillVector Vectorize(const Bill &bill, const Lexicon &lexicon, const Ontology &ontology,
                     const AdjudicatorOptions &options);

struct Classification {
  enum class Outcome { kClassified, kUnclassified, kTimeout };
  Outcome outcome = Outcome::kUnclassified;
  std::string doc_type;
  std::string subtype;
  // Axiom names that the bill entails.
  std::vector<std::string> hits;
};

Classification Classify(const BillVector &v, const Ontology &ontology, const Budget &budget);

// Exact (type, subtype) first; else the same-type benchmark with the largest
// predicate overlap, ties to the smaller id.
std::optional<Benchmark> RetrieveBenchmark(const KnowledgeStore &kb, const std::string &doc_type,
                                           const std::string &subtype, const BillVector &v);

enum class Status { kAutoApproved, kAutoReduced, kEscalated };
const char *StatusName(Status s);

struct Deduction {
  int line = 0;  // bill position
  int64_t amount = 0;
  // NOT_COVERED, QUANTITY_EXCESS, PRICE_EXCESS or GROUP_EXCESS.
  std::string code;
  std::string justification;
};

struct MatchedPair {
  std::vector<int> bill_lines;       // positions
  std::vector<int> benchmark_lines;  // 1-based benchmark line numbers
  Rational score;
  Equivalence relation = Equivalence::kIncomparable;
  // One-directional match; accepted but worth a human look.
  bool review = false;
};

struct TraceStep {
  std::string step;
  std::string detail;
};

struct Adjudication {
  std::string bill_id;
  Status status = Status::kEscalated;
  std::string reason_code;  // empty unless escalated
  std::string reason_detail;
  std::string doc_type;
  std::string subtype;
  std::string benchmark_id;
  int64_t total = 0;
  // Absent when escalated.
  std::optional<int64_t> approved;
  std::vector<Deduction> deductions;
  std::vector<MatchedPair> pairs;
  std::vector<int> unmatched_bill;
  std::vector<int> unmatched_benchmark;
  std::vector<TraceStep> trace;

  int64_t DeductionTotal() const;
  // Stable key order; identical inputs give identical output.
  nlohmann::ordered_json ToJson() const;
};

// Justification text for one deduction.
std::string Justify(const std::string &code, int64_t amount, const Rational &quantity_excess,
                    const Benchmark &benchmark, const BenchmarkLine *line);

Adjudication Adjudicate(const Bill &bill, const KnowledgeStore &kb, const Ontology &ontology,
                        const Lexicon &lexicon, const AdjudicatorOptions &options);

// Parses then adjudicates; a malformed document becomes an escalation with
// reason MALFORMED_BILL.
Adjudication AdjudicateDocument(std::string_view json_text, const KnowledgeStore &kb,
                                const Ontology &ontology, const Lexicon &lexicon,
                                const AdjudicatorOptions &options);

// "123.45" from minor units.
std::string FormatMoney(int64_t minor);

}  // namespace claims

#endif  // CLAIMS_ADJUDICATOR_H_
