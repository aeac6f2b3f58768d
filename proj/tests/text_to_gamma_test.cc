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

#include <algorithm>

#include "claims/lowering.h"
#include "claims/text_to_gamma.h"
#include "doctest.h"
#include "oracles.h"

namespace claims {
namespace {

const Lexicon &Lex() {
  static const Lexicon lexicon = Lexicon::Load(CLAIMS_DATA_DIR "/lexicon.txt");
  return lexicon;
}

const Ontology &Narrative() {
  static const Ontology ontology =
      Ontology::Load(CLAIMS_DATA_DIR "/ontology/predator_prey.onto");
  return ontology;
}

std::vector<std::string> Rendered(const GammaResult &r) {
  std::vector<std::string> out;
  for (const Formula &f : r.readings) out.push_back(Render(f));
  return out;
}

std::vector<TaggedToken> Tag(std::string_view text) {
  return CorrectTokens(Tokenize(text), Lex(), 1);
}

TEST_CASE("tokenize") {
  std::vector<Token> t = Tokenize("John's father did not return.");
  std::vector<std::string> words;
  for (const Token &k : t) words.push_back(k.text);
  CHECK(words == std::vector<std::string>{"John", "'s", "father", "did", "not", "return", "."});
  CHECK(t.back().kind == Token::Kind::kPunct);
  CHECK(Tokenize("").empty());
  CHECK(Tokenize("Every man loves one woman").size() == 5);
  std::vector<Token> n = Tokenize("2.5 hours, 3 clips");
  CHECK(n[0].kind == Token::Kind::kNumber);
  CHECK(n[0].text == "2.5");
  CHECK(n[2].kind == Token::Kind::kPunct);
}

TEST_CASE("correction and multi-word grouping") {
  std::vector<TaggedToken> t = Tag("John is serching for him");
  REQUIRE(t.size() == 5);
  CHECK(t[2].form == "searching");
  CHECK(t[2].distance == 1);
  std::vector<TaggedToken> m = Tag("replace rear window");
  REQUIRE(m.size() == 2);
  CHECK(m[1].form == "rear window");
  CHECK(m[1].position == 1);
  try {
    Tag("replace the qxzzv");
    FAIL("expected UnknownTokenError");
  } catch (const UnknownTokenError &e) {
    CHECK(e.position() == 2);
    CHECK(e.token() == "qxzzv");
  }
}

TEST_CASE("parse_syntax tree counts") {
  std::vector<TreePtr> cat = ParseSyntax(Tag("The cat caught the mouse."));
  REQUIRE(cat.size() == 1);
  CHECK(cat[0]->ToString() ==
        "(S (CL (NP (DET the) (NOM (NBAR (N cat)))) (VP (VFIN (VT.FIN caught) "
        "(NP (DET the) (NOM (NBAR (N mouse))))))))");
  CHECK(ParseSyntax(Tag("Every man loves one woman.")).size() == 1);
  CHECK(ParseSyntax(Tag("did runs cat the.")).empty());
  CHECK(ParseSyntax(Tag("windscreen replacement"), StartSymbol::kItem).size() == 1);
}

TEST_CASE("possessive, negation and intensionality") {
  GammaResult r = TextToGamma("John's father did not return. Now John is searching for him.",
                              Lex(), &Narrative());
  CHECK(r.context.flags.empty());
  REQUIRE(r.readings.size() == 1);
  CHECK(Render(r.readings[0]) ==
        "father(x1) and john(x2) and mod(x1,x2) and not return_p(x1) and searches_i(x2,x1)");
  REQUIRE(r.context.pending_intensional.size() == 1);

  DeltaSet d = Lower(r.readings[0], r.context);
  CHECK(d.Serialize() ==
        "[fol]\nfather(sk1)\njohn(sk2)\nmod(sk1,sk2)\n-return(sk1,e1)\n"
        "searches_i(sk2,sk1,e2)\n[temporal]\nbefore(e1,e2)\n");
}

TEST_CASE("affirmative presence does not license intensionality") {
  GammaResult r = TextToGamma("John's father returned. Now John is searching for him.", Lex(),
                              &Narrative());
  REQUIRE(r.readings.size() == 1);
  CHECK(Render(r.readings[0]) ==
        "father(x1) and john(x2) and mod(x1,x2) and return_p(x1) and searches(x2,x1)");
  CHECK(r.context.pending_intensional.empty());

  GammaResult u = TextToGamma("John is searching for a unicorn.", Lex(), nullptr);
  REQUIRE(u.readings.size() == 1);
  CHECK(Render(u.readings[0]) == "john(x1) and exists x2 (unicorn(x2) and searches(x1,x2))");
}

TEST_CASE("later presence resolves a pending intensional object") {
  GammaResult r = TextToGamma(
      "John's father did not return. Now John is searching for him. The father came back.",
      Lex(), &Narrative());
  REQUIRE(r.readings.size() == 1);
  CHECK(r.context.pending_intensional.empty());
  CHECK(Render(r.readings[0]) ==
        "father(x1) and john(x2) and mod(x1,x2) and not return_p(x1) and searches(x2,x1) "
        "and father(x1) and return_p(x1)");

  GammaResult unrelated = TextToGamma(
      "John's father did not return. Now John is searching for him. The cat came back.",
      Lex(), &Narrative());
  CHECK(unrelated.context.pending_intensional.size() == 1);
}

TEST_CASE("scope ambiguity yields two readings, surface order first") {
  GammaResult r = TextToGamma("Every man loves one woman.", Lex(), nullptr);
  CHECK(Rendered(r) ==
        std::vector<std::string>{
            "forall x1 (man(x1) -> exists x2 (woman(x2) and loves(x1,x2)))",
            "exists x2 (woman(x2) and forall x1 (man(x1) -> loves(x1,x2)))"});
}

TEST_CASE("anaphora uses world knowledge") {
  auto it_of = [](const std::string &text, const Ontology *o) {
    GammaResult r = TextToGamma(text, Lex(), o);
    return r;
  };
  GammaResult slow = it_of("The cat caught the mouse because it was slow.", &Narrative());
  CHECK(slow.context.flags.empty());
  CHECK(Rendered(slow) ==
        std::vector<std::string>{"cat(x1) and mouse(x2) and catch_p(x1,x2) and slow(x2)"});
  GammaResult quick = it_of("The cat caught the mouse because it was quick.", &Narrative());
  CHECK(Rendered(quick) ==
        std::vector<std::string>{"cat(x1) and mouse(x2) and catch_p(x1,x2) and quick(x1)"});
  GammaResult none = it_of("The cat caught the mouse because it was slow.", nullptr);
  CHECK(none.context.flags.count(kFlagAmbiguous) == 1);
}

TEST_CASE("gender filters candidates") {
  GammaResult r = TextToGamma("Mary saw the cat. She loves it.", Lex(), nullptr);
  CHECK(r.context.flags.empty());
  CHECK(Rendered(r) == std::vector<std::string>{
                           "mary(x1) and cat(x2) and see_p(x1,x2) and loves(x1,x2)"});
}

TEST_CASE("items: imperative and deverbal forms agree") {
  GammaResult a = TextToGamma("replace windscreen", Lex(), nullptr, {}, StartSymbol::kItem);
  GammaResult b = TextToGamma("windscreen replacement", Lex(), nullptr, {}, StartSymbol::kItem);
  CHECK(Rendered(a) == std::vector<std::string>{"windscreen(x1) and replace(x1)"});
  CHECK(Rendered(a) == Rendered(b));
  GammaResult c = TextToGamma("windscreen moulding", Lex(), nullptr, {}, StartSymbol::kItem);
  CHECK(Rendered(c) == std::vector<std::string>{"moulding(x1) and windscreen(x2) and amod(x1,x2)"});
  GammaResult d = TextToGamma("dispose of old glass", Lex(), nullptr, {}, StartSymbol::kItem);
  CHECK(Rendered(d) == std::vector<std::string>{"old(x1) and glass(x1) and dispose(x1)"});
}

TEST_CASE("failures are flagged, never silent") {
  GammaResult u = TextToGamma("The cat qxzzv the mouse.", Lex(), nullptr);
  CHECK(u.context.flags.count(kFlagUnknownToken) == 1);
  REQUIRE(u.unknown_token.has_value());
  CHECK(u.unknown_token->position() == 2);
  GammaResult p = TextToGamma("did runs cat the.", Lex(), nullptr);
  CHECK(p.context.flags.count(kFlagUnparseable) == 1);
  GammaResult e = TextToGamma("", Lex(), nullptr);
  CHECK_FALSE(e.ok());
}

TEST_CASE("rendered readings reparse and output is deterministic") {
  for (const char *text :
       {"Every man loves one woman.", "John's father did not return. Now John is searching for him.",
        "Every cat may catch a mouse.", "John will not find the dog."}) {
    GammaResult r1 = TextToGamma(text, Lex(), &Narrative());
    GammaResult r2 = TextToGamma(text, Lex(), &Narrative());
    CHECK(Rendered(r1) == Rendered(r2));
    for (const Formula &f : r1.readings) {
      CHECK(Render(ParseFormula(Render(f))) == Render(f));
    }
  }
}

TEST_CASE("de re entails de dicto, checked by model enumeration") {
  GammaResult r = TextToGamma("Every man loves one woman.", Lex(), nullptr);
  REQUIRE(r.readings.size() == 2);
  Formula dicto = StripAnnotations(r.readings[0]);
  Formula re = StripAnnotations(r.readings[1]);
  bool re_implies_dicto = true;
  bool dicto_implies_re = true;
  oracle::EnumerateModels({{"man", 1}, {"woman", 1}, {"loves", 2}}, {}, 3,
                          [&](const oracle::FiniteModel &m) {
                            std::map<std::string, int> env;
                            bool d = m.Holds(dicto, &env);
                            bool e = m.Holds(re, &env);
                            if (e && !d) re_implies_dicto = false;
                            if (d && !e) dicto_implies_re = false;
                            return true;
                          });
  CHECK(re_implies_dicto);
  CHECK_FALSE(dicto_implies_re);
}

}  // namespace
}  // namespace claims
