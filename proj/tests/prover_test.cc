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

#include <chrono>
#include <random>
#include <thread>

#include "claims/lowering.h"
#include "claims/prover.h"
#include "doctest.h"
#include "oracles.h"
#include "random_clauses.h"

namespace claims {
namespace {

Budget Ms(int ms) {
  Budget b;
  b.max_duration = std::chrono::milliseconds(ms);
  return b;
}

TEST_CASE("syllogism is proved and the proof replays") {
  std::vector<Clause> delta = ParseClauses("man(socrates)\n-man(x1) | mortal(x1)\n");
  ProofResult r = Entails(delta, ParseFormula("mortal(socrates)"), Ms(500));
  REQUIRE(r.verdict == Verdict::kProved);
  REQUIRE(r.proof.has_value());
  CHECK(r.proof->back().clause.empty());

  std::vector<Clause> inputs = delta;
  inputs.push_back(ParseClause("-mortal(socrates)"));
  ProofCheck check = CheckProof(*r.proof, inputs);
  CHECK_MESSAGE(check.ok, check.error);

  std::string text = SerializeProof(*r.proof);
  std::vector<ProofStep> reparsed = ParseProof(text);
  CHECK(SerializeProof(reparsed) == text);
  CHECK(CheckProof(reparsed, inputs).ok);
}

TEST_CASE("non-consequence is refuted by saturation") {
  ProofResult r = Entails(ParseClauses("p\n"), ParseFormula("q"), Ms(500));
  CHECK(r.verdict == Verdict::kRefuted);
  CHECK_FALSE(r.proof.has_value());
}

TEST_CASE("checker rejects forged steps") {
  std::vector<Clause> inputs = ParseClauses("p(a)\n-q(a)\n");
  std::vector<ProofStep> forged = ParseProof("1: p(a) [input]\n2: -q(a) [input]\n3: [] [resolve 1 2]\n");
  CHECK_FALSE(CheckProof(forged, inputs).ok);
  std::vector<ProofStep> no_input = ParseProof("1: r(a) [input]\n");
  CHECK_FALSE(CheckProof(no_input, inputs).ok);
}

TEST_CASE("factoring is needed and recorded") {
  // p(x) | p(y) with -p(a) | -p(b) needs factoring to refute.
  std::vector<Clause> cs = ParseClauses("p(x1) | p(x2)\n-p(x1) | -p(x2)\n");
  ProofResult r = Refute(cs, Ms(500));
  REQUIRE(r.verdict == Verdict::kProved);
  CHECK(CheckProof(*r.proof, cs).ok);
}

TEST_CASE("clausify examples") {
  CHECK(ClausesToString(Clausify(ParseFormula("p and (q or r)"))) == "p\nq | r\n");
  CHECK(ClausesToString(Clausify(ParseFormula("not (p and q)"))) == "-p | -q\n");
  CHECK(ClausesToString(Clausify(ParseFormula("(p -> q) and (q -> p)"))) ==
        "-p | q\n-q | p\n");
  CHECK(Clausify(ParseFormula("p or not p")).empty());
}

TEST_CASE("skolemize examples") {
  CHECK(Render(Skolemize(ParseFormula("exists x1 (father(x1))"))) == "father(sk1)");
  Formula qf = ParseFormula("p(a) -> q(a)");
  CHECK(Skolemize(qf) == qf);
  CHECK_THROWS_AS(Skolemize(ParseFormula(
                      "forall x1 (man(x1) -> exists x2 (loves(x1,x2)))")),
                  LoweringError);
  try {
    Skolemize(ParseFormula("forall x1 (man(x1) -> exists x2 (loves(x1,x2)))"));
  } catch (const LoweringError &e) {
    CHECK(e.kind() == LoweringError::Kind::kNestedExistential);
  }
  SkolemCounter c;
  Formula f = Skolemize(ParseFormula("forall x1 (man(x1) -> exists x2 (loves(x1,x2)))"),
                        SkolemMode::kFunctions, &c);
  CHECK(Render(f) == "forall x1 (not man(x1) or loves(x1,skf1(x1)))");
}

TEST_CASE("standard translation") {
  CHECK(Render(StandardTranslation(ParseFormula("box p"))) ==
        "forall x1 (acc(w0,x1) -> p(x1))");
  CHECK(Render(StandardTranslation(ParseFormula("dia p"))) ==
        "exists x1 (acc(w0,x1) and p(x1))");
  CHECK(Render(StandardTranslation(ParseFormula("p"))) == "p(w0)");
}

TEST_CASE("prop_decide") {
  CHECK_FALSE(PropDecide(ParseFormula("p and not p")).satisfiable);
  PropModels m = PropDecide(ParseFormula("p -> q"));
  CHECK(m.models.size() == 3);
  CHECK(m.atoms == std::vector<std::string>{"p", "q"});
  CHECK(m.models[0] == std::vector<bool>{false, false});
  CHECK(m.models[2] == std::vector<bool>{true, true});
  // With p fixed true, q is forced.
  PropModels forced = PropDecide(ParseFormula("(p -> q) and p"));
  REQUIRE(forced.models.size() == 1);
  CHECK(forced.models[0] == std::vector<bool>{true, true});
  CHECK_THROWS(PropDecide(ParseFormula("forall x1 (p(x1))")));
}

TEST_CASE("equivalence verdicts") {
  std::vector<Clause> p = ParseClauses("a(c)\nb(c)\n");
  std::vector<Clause> q = ParseClauses("a(c)\n");
  CHECK(Equivalent(p, p, {}, Ms(500)).relation == Equivalence::kEquivalent);
  CHECK(Equivalent(p, q, {}, Ms(500)).relation == Equivalence::kPStrictlyStronger);
  CHECK(Equivalent(q, p, {}, Ms(500)).relation == Equivalence::kQStrictlyStronger);
  std::vector<Clause> r = ParseClauses("d(c)\n");
  CHECK(Equivalent(q, r, {}, Ms(500)).relation == Equivalence::kIncomparable);
  // Skolem constants are read existentially on the entailed side.
  std::vector<Clause> s1 = ParseClauses("windscreen(sk1)\nreplace(sk1)\n");
  std::vector<Clause> s2 = ParseClauses("replace(sk4)\nwindscreen(sk4)\n");
  CHECK(Equivalent(s1, s2, {}, Ms(500)).relation == Equivalence::kEquivalent);
}

TEST_CASE("budget: clause limit gives reproducible TIMEOUT") {
  // Successor chain that never saturates.
  std::vector<Clause> cs = ParseClauses("nat(zero)\n-nat(x1) | nat(s(x1))\n");
  Budget b = Ms(5000);
  b.max_clauses = 50;
  ProofResult r1 = Refute(cs, b);
  ProofResult r2 = Refute(cs, b);
  CHECK(r1.verdict == Verdict::kTimeout);
  CHECK(r1.stats.clauses_generated == r2.stats.clauses_generated);
}

TEST_CASE("budget: wall clock and cancellation") {
  std::vector<Clause> cs = ParseClauses("nat(zero)\n-nat(x1) | nat(s(x1))\n");
  Budget b = Ms(100);
  b.max_clauses = 100000000;
  auto start = std::chrono::steady_clock::now();
  ProofResult r = Refute(cs, b);
  auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(r.verdict == Verdict::kTimeout);
  CHECK(elapsed < std::chrono::milliseconds(200));

  std::stop_source source;
  Budget c = Ms(60000);
  c.max_clauses = 100000000;
  c.stop = source.get_token();
  std::thread canceller([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    source.request_stop();
  });
  start = std::chrono::steady_clock::now();
  ProofResult rc = Refute(cs, c);
  canceller.join();
  CHECK(rc.verdict == Verdict::kTimeout);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(2));
}

TEST_CASE("ground completeness against Herbrand enumeration (sampled)") {
  std::mt19937 rng(7);
  int disagreements = 0;
  for (int trial = 0; trial < 200; ++trial) {
    testing::RandomProblem prob = testing::MakeRandomProblem(&rng);
    std::vector<Clause> all = prob.delta;
    all.push_back(prob.negated_goal);
    bool sat = oracle::HerbrandSatisfiable(all);
    ProofResult r = Refute(all, Ms(500));
    if (r.verdict == Verdict::kTimeout) continue;
    if ((r.verdict == Verdict::kProved) == sat) ++disagreements;
    if (r.verdict == Verdict::kProved) {
      ProofCheck check = CheckProof(*r.proof, all);
      CHECK_MESSAGE(check.ok, check.error);
    }
  }
  CHECK(disagreements == 0);
}

TEST_CASE("prop_decide agrees with entails on random propositional formulae") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Formula premise = testing::RandomPropFormula(&rng, 4, 3);
    Formula goal = testing::RandomPropFormula(&rng, 4, 2);
    bool valid = !PropDecide(Formula::And(premise, Formula::Not(goal))).satisfiable;
    ProofResult r = Entails(Clausify(premise), goal, Ms(500));
    REQUIRE(r.verdict != Verdict::kTimeout);
    CHECK((r.verdict == Verdict::kProved) == valid);
  }
}

TEST_CASE("equivalent is symmetric on random inputs") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Clause> p = testing::MakeRandomProblem(&rng).delta;
    std::vector<Clause> q = testing::MakeRandomProblem(&rng).delta;
    EquivalenceResult pq = Equivalent(p, q, {}, Ms(500));
    EquivalenceResult qp = Equivalent(q, p, {}, Ms(500));
    CHECK(pq.p_entails_q == qp.q_entails_p);
    CHECK(pq.q_entails_p == qp.p_entails_q);
    CHECK(Equivalent(p, p, {}, Ms(500)).relation == Equivalence::kEquivalent);
  }
}

}  // namespace
}  // namespace claims
