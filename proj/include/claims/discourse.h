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

#ifndef CLAIMS_DISCOURSE_H_
#define CLAIMS_DISCOURSE_H_

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "claims/formula.h"
#include "claims/lexicon.h"

namespace claims {

inline constexpr char kFlagAmbiguous[] = "AMBIGUOUS";
inline constexpr char kFlagUnparseable[] = "UNPARSEABLE";
inline constexpr char kFlagUnknownToken[] = "UNKNOWN_TOKEN";

struct Mention {
  int sentence = 0;
  int clause = 0;
  bool operator==(const Mention &) const = default;
};

struct Referent {
  Term term;              // always a variable
  std::string predicate;  // introducing predicate ("father", "john", "it")
  int sentence = 0;
  std::string gender;     // "m", "f", "n" or empty when unknown
  Number number = Number::kSingular;
  bool pronoun = false;
  // Introduced by a proper noun; later mentions of the name reuse it.
  bool proper = false;
  // Noun predicates asserted of the referent.
  std::vector<std::string> sorts;
  std::vector<Mention> mentions;
};

struct VerbOccurrence {
  int id = 0;
  int sentence = 0;
  int clause = 0;
  bool finite = false;
  Tense tense = Tense::kNone;
  std::string predicate;
  bool negated = false;
  bool intensional_capable = false;
  bool presence_inducing = false;
  bool intensional = false;
  // Agent first, then patient. Variables until lowering.
  std::vector<Term> args;
};

struct PendingIntensional {
  int occurrence = 0;
  int sentence = 0;
  bool operator==(const PendingIntensional &) const = default;
};

struct SentenceRecord {
  std::string text;
  std::vector<Formula> readings;
};

// Discourse-level state threaded through the text-to-Gamma stages.
struct DiscourseContext {
  std::vector<SentenceRecord> sentences;
  std::vector<Referent> referents;
  std::vector<VerbOccurrence> verbs;
  std::vector<PendingIntensional> pending_intensional;
  std::set<std::string> flags;
  int next_variable = 1;

  Term NewVariable() { return Term::Var(next_variable++); }

  Referent *FindReferent(const std::string &var);
  const Referent *FindReferent(const std::string &var) const;
  VerbOccurrence *FindVerb(int id);
  const VerbOccurrence *FindVerb(int id) const;

  // Replaces variable `var` by `target` everywhere: readings, verb arguments
  // and referents. The referent for `var` is merged into the one for `target`.
  void Substitute(const std::string &var, const Term &target);

  // Rewrites every atom carrying occurrence `id` through `fn`.
  void RewriteOccurrence(int id, const std::function<Formula(const Formula &)> &fn);

  // Sentence readings combined into discourse readings: the cartesian
  // product over sentences with readings, each a flat conjunction, at most
  // `cap` combinations.
  std::vector<Formula> DiscourseReadings(size_t cap = 64) const;
};

}  // namespace claims

#endif  // CLAIMS_DISCOURSE_H_
