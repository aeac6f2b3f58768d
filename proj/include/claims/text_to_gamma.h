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

// Controlled-English text to Gamma formulae: tokenizer, spelling correction,
// chart parser, compositional semantics and discourse-level passes.

#ifndef CLAIMS_TEXT_TO_GAMMA_H_
#define CLAIMS_TEXT_TO_GAMMA_H_

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "claims/discourse.h"
#include "claims/formula.h"
#include "claims/lexicon.h"
#include "claims/ontology.h"
#include "claims/prover.h"

namespace claims {

struct Token {
  enum class Kind { kWord, kPunct, kNumber };
  Kind kind = Kind::kWord;
  std::string text;
  size_t offset = 0;  // byte offset in the input
};

// Splits text into words, punctuation and numbers. The possessive clitic
// "'s" becomes its own token.
std::vector<Token> Tokenize(std::string_view text);

class UnknownTokenError : public std::runtime_error {
 public:
  UnknownTokenError(std::string token, size_t position)
      : std::runtime_error("unknown token '" + token + "' at position " +
                           std::to_string(position)),
        token_(std::move(token)),
        position_(position) {}
  const std::string &token() const { return token_; }
  // Index of the token in the Tokenize output.
  size_t position() const { return position_; }

 private:
  std::string token_;
  size_t position_;
};

class CompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A token after correction and multi-word grouping.
struct TaggedToken {
  Token::Kind kind = Token::Kind::kWord;
  std::string surface;  // original text (joined for multi-word forms)
  std::string form;     // lexicon form, lowercase
  int distance = 0;     // edit distance of the correction
  size_t position = 0;  // index of the first underlying token
  std::vector<MorphAnalysis> analyses;
};

// Corrects every word token against the lexicon and groups multi-word
// forms. Throws UnknownTokenError for the first uncorrectable word.
std::vector<TaggedToken> CorrectTokens(const std::vector<Token> &tokens,
                                       const Lexicon &lexicon, int max_edit);

struct SyntaxTree {
  std::string symbol;
  // Preterminals only.
  std::string word;
  MorphAnalysis analysis;
  bool number = false;
  std::vector<std::shared_ptr<const SyntaxTree>> children;

  bool is_leaf() const { return children.empty(); }
  // Bracketed form, e.g. (S (CL (NP (PN John)) ...)).
  std::string ToString() const;
};

using TreePtr = std::shared_ptr<const SyntaxTree>;

enum class StartSymbol { kSentence, kItem };

inline constexpr size_t kMaxTrees = 64;

// All parses of one sentence (or bill item) covering every token, at most
// `cap`. Terminators and commas are ignored. Empty result: unparseable.
std::vector<TreePtr> ParseSyntax(const std::vector<TaggedToken> &tokens,
                                 StartSymbol start = StartSymbol::kSentence,
                                 size_t cap = kMaxTrees);

// Composes the readings of one parse tree as sentence `sentence` of the
// discourse, registering referents and verb occurrences in `ctx`. Readings
// are the quantifier-scope permutations, surface order first.
std::vector<Formula> ComposeSemantics(const SyntaxTree &tree, int sentence,
                                      DiscourseContext *ctx,
                                      StartSymbol start = StartSymbol::kSentence);

// Marks intensional-capable verb occurrences whose object is the subject of a
// negated presence-inducing verb in an earlier sentence.
void AnnotateIntensionality(DiscourseContext *ctx);

// Resolves pending intensional occurrences against later affirmative
// presence-inducing verbs whose subject shares a sort with the object.
// `ontology` may be null, in which case sorts must match exactly.
void ResolveIntensional(DiscourseContext *ctx, const Ontology *ontology);

// Binds each pronoun to its unique consistent antecedent, or flags the
// context AMBIGUOUS. `ontology` may be null (no world knowledge).
void ResolveAnaphora(DiscourseContext *ctx, const Ontology *ontology,
                     const Budget &budget);

struct GammaOptions {
  int max_edit = 1;
  Budget budget;
  size_t max_readings = kMaxTrees;
};

struct GammaResult {
  DiscourseContext context;
  // Discourse readings, each a flat conjunction over the sentences.
  std::vector<Formula> readings;
  std::vector<TaggedToken> tokens;
  std::optional<UnknownTokenError> unknown_token;

  bool ok() const { return context.flags.empty() && !readings.empty(); }
};

// Full text-to-Gamma pipeline. Never throws for bad input text; failures are
// reported through flags and `unknown_token`.
GammaResult TextToGamma(std::string_view text, const Lexicon &lexicon,
                        const Ontology *ontology, const GammaOptions &options = {},
                        StartSymbol start = StartSymbol::kSentence);

}  // namespace claims

#endif  // CLAIMS_TEXT_TO_GAMMA_H_
