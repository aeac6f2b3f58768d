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

#ifndef CLAIMS_LEXICON_H_
#define CLAIMS_LEXICON_H_

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace claims {

enum class WordClass {
  kNoun,
  kProperNoun,
  kVerb,
  kAdj,
  kDet,
  kPrep,
  kPron,
  kNeg,
  kAdv,
  kAux,   // do-support, copula, modals
  kConj,  // clause connectives
  kPoss,  // possessive clitic
};

enum class Tense { kNone, kPresent, kPast, kFuture };
enum class Number { kNone, kSingular, kPlural };
enum class Aspect { kSimple, kProgressive };
enum class Transitivity { kIntransitive, kTransitive, kDitransitive };

const char *WordClassName(WordClass c);
const char *TenseName(Tense t);

struct FeatureSet {
  Tense tense = Tense::kNone;
  Number number = Number::kNone;
  std::optional<int> person;
  Aspect aspect = Aspect::kSimple;

  bool operator==(const FeatureSet &) const = default;
};

struct VerbFeatures {
  Transitivity transitivity = Transitivity::kIntransitive;
  bool intensional_capable = false;
  bool presence_inducing = false;
  std::map<Tense, std::string> tense_forms;
  // Preposition that introduces the object ("search for"), empty if none.
  std::string preposition;
  // Predicate name used in logical forms.
  std::string predicate;
};

struct SurfaceForm {
  std::string form;
  FeatureSet features;
};

struct Lexeme {
  std::string lemma;
  WordClass word_class = WordClass::kNoun;
  std::vector<SurfaceForm> surface_forms;
  std::optional<VerbFeatures> verb_features;
  // Remaining key=value features (gender, deverbal, quant, aux, ...).
  std::map<std::string, std::string> attributes;

  // Returns the attribute value or an empty string.
  const std::string &Attribute(const std::string &key) const;
  // Name of the predicate this lexeme contributes to a logical form.
  std::string PredicateName() const;
};

struct MorphAnalysis {
  const Lexeme *lexeme = nullptr;
  FeatureSet features;
};

struct CorrectionResult {
  enum class Kind { kOriginal, kCorrected, kUnknown };
  Kind kind = Kind::kUnknown;
  std::string form;
  int distance = 0;

  static CorrectionResult Original(std::string form) {
    return {Kind::kOriginal, std::move(form), 0};
  }
  static CorrectionResult Corrected(std::string form, int distance) {
    return {Kind::kCorrected, std::move(form), distance};
  }
  static CorrectionResult Unknown() { return {}; }
};

class LexiconError : public std::runtime_error {
 public:
  LexiconError(const std::string &message, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Levenshtein distance with unit costs.
int EditDistance(std::string_view a, std::string_view b);

// Immutable dictionary of lexemes. Copies share the underlying storage, so
// MorphAnalysis pointers stay valid while any copy is alive.
class Lexicon {
 public:
  Lexicon();

  static Lexicon Load(const std::string &path);
  static Lexicon Parse(std::string_view text);

  // All analyses whose surface form matches (case-insensitive).
  std::vector<MorphAnalysis> Analyze(std::string_view surface) const;

  // Bounded edit-distance correction against single-word forms and the words
  // of multi-word forms. Ties and misses yield kUnknown.
  CorrectionResult Correct(std::string_view token, int max_edit) const;

  // Length in tokens of the longest multi-word form starting at tokens[0],
  // or 0 if none matches.
  size_t MatchMultiword(std::span<const std::string> tokens) const;

  // Finds a lexeme by lemma and class.
  const Lexeme *Find(std::string_view lemma, WordClass word_class) const;

  size_t size() const;
  const std::vector<Lexeme> &lexemes() const;

 private:
  struct Data;
  explicit Lexicon(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

// Lowercases ASCII letters.
std::string ToLower(std::string_view s);

}  // namespace claims

#endif  // CLAIMS_LEXICON_H_
