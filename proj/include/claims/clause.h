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

#ifndef CLAIMS_CLAUSE_H_
#define CLAIMS_CLAUSE_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "claims/formula.h"

namespace claims {

struct Literal {
  bool positive = true;
  std::string predicate;
  std::vector<Term> args;

  Literal Negated() const { return {!positive, predicate, args}; }
  bool IsComplementOf(const Literal &other) const {
    return positive != other.positive && predicate == other.predicate &&
           args == other.args;
  }
  std::string ToString() const;

  bool operator==(const Literal &other) const;
  bool operator!=(const Literal &other) const { return !(*this == other); }
  bool operator<(const Literal &other) const;
};

// A disjunction of literals; variables are implicitly universally quantified.
struct Clause {
  std::vector<Literal> literals;

  bool empty() const { return literals.empty(); }
  bool IsTautology() const;
  bool IsGround() const;
  // Removes duplicate literals, keeping first occurrences.
  void Dedupe();
  std::string ToString() const;

  bool operator==(const Clause &other) const { return literals == other.literals; }
  bool operator!=(const Clause &other) const { return !(*this == other); }
  bool operator<(const Clause &other) const { return literals < other.literals; }
};

struct TemporalFact {
  Term earlier;
  Term later;

  bool operator==(const TemporalFact &other) const {
    return earlier == other.earlier && later == other.later;
  }
};

enum class Dialect { kFolClauses, kTemporalFacts, kModalTranslated };

// Computable lowering of one Gamma reading.
struct DeltaSet {
  std::vector<Clause> fol;
  std::vector<TemporalFact> temporal;
  std::vector<Clause> modal;

  bool empty() const { return fol.empty() && temporal.empty() && modal.empty(); }

  // Section-headed text form; sections with no content are omitted.
  std::string Serialize() const;
  static DeltaSet Parse(std::string_view text);

  // Predicate names occurring in fol and modal clauses.
  std::set<std::string> Predicates() const;

  bool operator==(const DeltaSet &other) const {
    return fol == other.fol && temporal == other.temporal && modal == other.modal;
  }
};

Literal ParseLiteral(std::string_view text);
Clause ParseClause(std::string_view text);

// Renders a clause set one clause per line.
std::string ClausesToString(const std::vector<Clause> &clauses);
std::vector<Clause> ParseClauses(std::string_view text);

}  // namespace claims

#endif  // CLAIMS_CLAUSE_H_
