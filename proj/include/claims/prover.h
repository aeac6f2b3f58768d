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

// Resolution theorem prover with time and clause budgets.
//
// The calculus is binary resolution restricted so that one parent is a
// positive clause, plus factoring, forward and backward subsumption and
// tautology deletion. A given-clause loop selects the clause with the fewest
// literals, then the lowest symbol weight, then the oldest. Saturation without
// the empty clause yields REFUTED; running out of budget yields TIMEOUT.

#ifndef CLAIMS_PROVER_H_
#define CLAIMS_PROVER_H_

#include <chrono>
#include <cstddef>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "claims/clause.h"
#include "claims/formula.h"

namespace claims {

struct Budget {
  std::chrono::milliseconds max_duration{500};
  size_t max_clauses = 20000;
  // Cooperative cancellation from outside the search.
  std::stop_token stop;

  // Throws std::invalid_argument unless both limits are positive.
  void Validate() const;
};

enum class Verdict { kProved, kRefuted, kTimeout };
const char *VerdictName(Verdict v);

struct ProofStep {
  enum class Rule { kInput, kResolve, kFactor };

  int id = 0;
  Clause clause;
  Rule rule = Rule::kInput;
  int a = 0;
  int b = 0;
};

struct ProofStats {
  size_t clauses_generated = 0;
  std::chrono::microseconds elapsed{0};
};

struct ProofResult {
  Verdict verdict = Verdict::kTimeout;
  // Present iff verdict is kProved; the last step is the empty clause.
  std::optional<std::vector<ProofStep>> proof;
  ProofStats stats;
};

// Searches for a refutation of the clause set. kProved means unsatisfiable.
ProofResult Refute(const std::vector<Clause> &clauses, const Budget &budget);

// Decides delta |- goal by refuting delta plus the clausified negated goal.
// Existentials in the negated goal become Skolem terms that are fresh with
// respect to delta.
ProofResult Entails(const std::vector<Clause> &delta, const Formula &goal,
                    const Budget &budget);

enum class Equivalence {
  kEquivalent,
  kPStrictlyStronger,
  kQStrictlyStronger,
  kIncomparable,
  kTimeout,
};
const char *EquivalenceName(Equivalence e);

struct EquivalenceResult {
  Equivalence relation = Equivalence::kTimeout;
  Verdict p_entails_q = Verdict::kTimeout;
  Verdict q_entails_p = Verdict::kTimeout;
};

// Bidirectional entailment between two clause sets under shared background
// clauses. Skolem and event constants of the entailed side are read
// existentially.
EquivalenceResult Equivalent(const std::vector<Clause> &p, const std::vector<Clause> &q,
                             const std::vector<Clause> &background,
                             const Budget &budget);

// Proof objects: one step per line, `n: <clause> [input | resolve a b | factor a]`.
std::string SerializeProof(const std::vector<ProofStep> &steps);
std::vector<ProofStep> ParseProof(std::string_view text);

struct ProofCheck {
  bool ok = false;
  std::string error;
};

// Replays a proof against the input clauses with its own unification code.
ProofCheck CheckProof(const std::vector<ProofStep> &steps,
                      const std::vector<Clause> &inputs);

struct PropModels {
  bool satisfiable = false;
  // Atom names in sorted order; each model lists truth values in that order.
  std::vector<std::string> atoms;
  std::vector<std::vector<bool>> models;
};

inline constexpr int kMaxPropAtoms = 20;

// Exhaustive truth-table decision for propositional formulae (0-ary atoms
// only). Models are listed in binary counting order, first atom most
// significant, false before true.
PropModels PropDecide(const Formula &f);

}  // namespace claims

#endif  // CLAIMS_PROVER_H_
