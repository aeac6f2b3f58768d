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

#ifndef CLAIMS_LOWERING_H_
#define CLAIMS_LOWERING_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "claims/clause.h"
#include "claims/discourse.h"
#include "claims/formula.h"

namespace claims {

class LoweringError : public std::runtime_error {
 public:
  enum class Kind { kHigherOrderInput, kNestedExistential, kUnsupported };

  LoweringError(Kind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }
  // Machine-readable reason code.
  const char *code() const;

 private:
  Kind kind_;
};

enum class SkolemMode {
  // Existentials under a universal raise NestedExistential.
  kConstantsOnly,
  // Existentials under universals become Skolem functions skf<n>(...). Used
  // only inside the prover for negated goals and authored axioms.
  kFunctions,
};

struct SkolemCounter {
  int next_constant = 1;
  int next_function = 1;
};

// Negation normal form: implications eliminated, negation on atoms only.
Formula ToNnf(const Formula &f);

// Removes existential quantifiers. Quantifier-free input is returned
// unchanged; otherwise the result is in negation normal form with only
// universal quantifiers left.
Formula Skolemize(const Formula &f, SkolemMode mode = SkolemMode::kConstantsOnly,
                  SkolemCounter *counter = nullptr);

// Name of the accessibility predicate and actual-world constant used by the
// standard translation.
inline constexpr char kAccessibility[] = "acc";
inline constexpr char kActualWorld[] = "w0";

// Standard translation of box/dia into first-order quantification over
// worlds; every atom gains a trailing world argument.
Formula StandardTranslation(const Formula &f);

// CNF of a Skolemized formula. Literals are deduplicated, tautologies and
// duplicate clauses dropped; variables renamed x1.. per clause.
std::vector<Clause> Clausify(const Formula &f);

// Skolemize (Skolem functions allowed) and clausify in one step.
std::vector<Clause> ClausifyWithFunctions(const Formula &f, SkolemCounter *counter);

// Literal predicate name of an atom: name plus rendered subscripts.
std::string AtomPredicateName(const Formula &atom);

// Conjunction of the clauses as a closed formula. Skolem and event constants
// become existentially quantified variables so the result can serve as an
// entailment goal.
Formula GoalFromClauses(const std::vector<Clause> &clauses);

// Before facts for the finite verb occurrences of the context, transitively
// closed and acyclic.
std::vector<TemporalFact> ReifyTense(const DiscourseContext &ctx);

// First-order image of a reading before Skolemization: discourse referents
// become Skolem constants (numbered by referent order), finite verb
// occurrences get their event constant and lose the tense subscript, and
// affirmative presence assertions are added.
Formula GroundReading(const Formula &reading, const DiscourseContext &ctx,
                      int *next_skolem = nullptr);

// Full lowering of one reading.
DeltaSet Lower(const Formula &reading, const DiscourseContext &ctx);

// Lowers each reading separately.
std::vector<DeltaSet> Lower(const std::vector<Formula> &readings,
                            const DiscourseContext &ctx);

}  // namespace claims

#endif  // CLAIMS_LOWERING_H_
