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

#include "claims/adjudicator.h"
#include "doctest.h"
#include "fixtures.h"

namespace claims {
namespace {

using testing::DataPath;
using testing::ReadText;

struct World {
  testing::DemoWorld demo;
  testing::TempDir dir;
  KnowledgeStore kb{dir.path()};

  World() { demo.BuildKb(&kb); }

  Adjudication Run(const Bill &bill) {
    return Adjudicate(bill, kb, demo.ontology, demo.lexicon, demo.options);
  }
  Adjudication RunFixture(const std::string &name) {
    return Run(Bill::Parse(ReadText(DataPath("fixtures/" + name + ".json"))));
  }
};

World &Shared() {
  static World world;
  return world;
}

Bill OneLineBill(const std::string &text, int64_t price) {
  Bill b;
  b.id = "T";
  b.date = "2026-01-01";
  b.lines.push_back({1, text, Rational(1), price, price});
  return b;
}

void CheckConservation(const Adjudication &a) {
  if (a.status == Status::kEscalated) {
    CHECK_FALSE(a.approved.has_value());
    CHECK(a.deductions.empty());
    CHECK_FALSE(a.reason_code.empty());
    return;
  }
  REQUIRE(a.approved.has_value());
  CHECK(*a.approved + a.DeductionTotal() == a.total);
}

TEST_CASE("bill json parsing and validation") {
  Bill b = Bill::Parse(ReadText(DataPath("fixtures/windscreen_exact.json")));
  CHECK(b.id == "WS-0001");
  CHECK(b.lines.size() == 3);
  CHECK(b.lines[2].quantity == Rational(5, 2));
  CHECK(b.Total() == 61750);
  CHECK_NOTHROW(b.Validate());
  CHECK(Bill::Parse(b.ToJson().dump()).ToJson() == b.ToJson());

  b.lines[1].line_total += 1;
  try {
    b.Validate();
    FAIL("mismatch accepted");
  } catch (const BillError &e) {
    CHECK(e.code() == "TOTAL_MISMATCH");
  }
  for (const char *bad : {"{", "[]", "{\"id\": \"x\"}",
                          "{\"id\":\"x\",\"date\":\"d\",\"lines\":[{\"pos\":1,\"text\":\"a\","
                          "\"qty\":1,\"unit_price_minor\":1.5,\"total_minor\":2}]}"}) {
    try {
      Bill::Parse(bad);
      FAIL("accepted " << bad);
    } catch (const BillError &e) {
      CHECK(e.code() == "MALFORMED_BILL");
    }
  }
}

TEST_CASE("compile line") {
  World &w = Shared();
  auto compile = [&](const std::string &text) {
    return CompileLine(text, w.demo.lexicon, w.demo.ontology, w.demo.options);
  };
  CHECK(compile("Windshield replacement").rewritten_text == "replace windshield");
  CHECK(compile("replace windscreen").delta->Serialize() ==
        "[fol]\nwindscreen(sk1)\nreplace(sk1)\n");
  CHECK(compile("wiper blades").delta.has_value());
  CHECK(compile("xqzv glass").error_code == "UNKNOWN_TOKEN");
  CHECK(compile("windscreen replace").error_code == "UNPARSEABLE");
}

TEST_CASE("classification and retrieval") {
  World &w = Shared();
  auto vector_of = [&](const std::vector<std::string> &texts) {
    Bill b;
    b.id = "T";
    int pos = 0;
    for (const std::string &t : texts) b.lines.push_back({++pos, t, Rational(1), 1, 1});
    return Vectorize(b, w.demo.lexicon, w.demo.ontology, w.demo.options);
  };
  Budget budget;
  Classification c = Classify(vector_of({"replace back window", "labour"}), w.demo.ontology, budget);
  CHECK(c.outcome == Classification::Outcome::kClassified);
  CHECK(c.doc_type == "car-glass");
  CHECK(c.subtype == "rear-window");
  c = Classify(vector_of({"replace windshield"}), w.demo.ontology, budget);
  CHECK(c.subtype == "windscreen");
  c = Classify(vector_of({"replace windscreen", "replace rear window"}), w.demo.ontology, budget);
  CHECK(c.outcome == Classification::Outcome::kUnclassified);
  CHECK(c.hits.size() == 2);
  CHECK(Classify(vector_of({"labour"}), w.demo.ontology, budget).outcome ==
        Classification::Outcome::kUnclassified);
  CHECK(Classify(BillVector{}, w.demo.ontology, budget).outcome ==
        Classification::Outcome::kUnclassified);

  BillVector v = vector_of({"replace side window", "clean vehicle"});
  CHECK(RetrieveBenchmark(w.kb, "car-glass", "side-window", v)->id() == "car-glass/side-window");
  // Unknown subtype: the sibling sharing the most predicates wins.
  CHECK(RetrieveBenchmark(w.kb, "car-glass", "sunroof", v)->id() == "car-glass/side-window");
  CHECK_FALSE(RetrieveBenchmark(w.kb, "boat", "hull", v).has_value());
  testing::TempDir empty_dir;
  KnowledgeStore empty(empty_dir.path());
  CHECK_FALSE(RetrieveBenchmark(empty, "car-glass", "windscreen", v).has_value());
}

TEST_CASE("fixture bills") {
  World &w = Shared();
  Adjudication exact = w.RunFixture("windscreen_exact");
  CHECK(exact.status == Status::kAutoApproved);
  CHECK(*exact.approved == exact.total);
  CHECK(exact.deductions.empty());
  CHECK(exact.benchmark_id == "car-glass/windscreen");
  CheckConservation(exact);

  Adjudication reduced = w.RunFixture("windscreen_unmatched");
  CHECK(reduced.status == Status::kAutoReduced);
  REQUIRE(reduced.deductions.size() == 1);
  CHECK(reduced.deductions[0].line == 2);
  CHECK(reduced.deductions[0].amount == 4500);
  CHECK(reduced.deductions[0].code == "NOT_COVERED");
  CHECK(reduced.deductions[0].justification ==
        "Item not covered by benchmark car-glass/windscreen: Manufacturer glass repair "
        "schedule, windscreen section");
  CHECK(*reduced.approved == reduced.total - 4500);
  CHECK(reduced.unmatched_bill == std::vector<int>{2});
  CheckConservation(reduced);

  Adjudication group = w.RunFixture("rear_window_group");
  CHECK(group.status == Status::kAutoReduced);
  REQUIRE(group.deductions.size() == 1);
  CHECK(group.deductions[0].code == "GROUP_EXCESS");
  CHECK(group.deductions[0].line == 2);
  CHECK(group.deductions[0].amount == 1000);
  CheckConservation(group);

  Adjudication ten = w.RunFixture("ten_lines");
  CHECK(ten.status == Status::kAutoReduced);
  std::vector<std::pair<int, std::string>> got;
  for (const Deduction &d : ten.deductions) got.emplace_back(d.line, d.code);
  CHECK(got == std::vector<std::pair<int, std::string>>{{1, "PRICE_EXCESS"},
                                                        {6, "QUANTITY_EXCESS"},
                                                        {8, "NOT_COVERED"},
                                                        {9, "NOT_COVERED"},
                                                        {10, "NOT_COVERED"}});
  CHECK(ten.DeductionTotal() == 2500 + 3250 + 4500 + 2000 + 1800);
  CHECK(ten.deductions[0].justification ==
        "Unit price exceeds benchmark maximum by 25.00: W-1: one laminated windscreen per "
        "claim at list price 420.00");
  CHECK(ten.deductions[1].justification ==
        "Quantity exceeds benchmark maximum by 0.5: W-6: fitting time 2.5 hours at the agreed "
        "hourly rate");
  CheckConservation(ten);

  Adjudication bad = w.RunFixture("unparseable");
  CHECK(bad.status == Status::kEscalated);
  CHECK(bad.reason_code == "UNPARSEABLE");
  CHECK(bad.reason_detail == "line 2: unparseable");
  CheckConservation(bad);
}

TEST_CASE("escalation reasons") {
  World &w = Shared();
  Bill b = OneLineBill("replace windscreen", 100);
  b.lines[0].line_total = 99;
  CHECK(w.Run(b).reason_code == "TOTAL_MISMATCH");
  CHECK(w.Run(OneLineBill("labour", 100)).reason_code == "UNCLASSIFIED");
  CHECK(w.Run(OneLineBill("replace windscreen and", 100)).reason_code == "UNPARSEABLE");
  CHECK(w.Run(OneLineBill("replace wxndscrxxn", 100)).reason_code == "UNKNOWN_TOKEN");
  Adjudication malformed =
      AdjudicateDocument("{\"id\": \"x\", \"lin", w.kb, w.demo.ontology, w.demo.lexicon, {});
  CHECK(malformed.status == Status::kEscalated);
  CHECK(malformed.reason_code == "MALFORMED_BILL");

  testing::TempDir empty_dir;
  KnowledgeStore empty(empty_dir.path());
  Adjudication none =
      Adjudicate(OneLineBill("replace windscreen", 100), empty, w.demo.ontology, w.demo.lexicon, {});
  CHECK(none.reason_code == "NOT_FOUND");
}

TEST_CASE("one-directional match is flagged for review") {
  World &w = Shared();
  Adjudication a = w.Run(OneLineBill("replace heated windscreen", 42000));
  CHECK(a.status == Status::kAutoApproved);
  REQUIRE(a.pairs.size() == 1);
  CHECK(a.pairs[0].review);
  CHECK(a.pairs[0].score == Rational(3, 5));
  CHECK(a.ToJson()["review"] == true);
}

TEST_CASE("serialization is deterministic") {
  World &w = Shared();
  std::string first = CanonicalJson(w.RunFixture("ten_lines").ToJson());
  std::string second = CanonicalJson(w.RunFixture("ten_lines").ToJson());
  CHECK(first == second);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(first);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"bill_id", "status", "reason", "classification",
                                         "benchmark", "total_minor", "approved_minor",
                                         "deductions", "assignment", "review", "trace"});
}

TEST_CASE("removing a line never increases deductions on the others") {
  World &w = Shared();
  Bill full = Bill::Parse(ReadText(DataPath("fixtures/ten_lines.json")));
  Adjudication base = w.Run(full);
  for (size_t drop = 1; drop < full.lines.size(); ++drop) {
    Bill smaller = full;
    int dropped = smaller.lines[drop].pos;
    smaller.lines.erase(smaller.lines.begin() + drop);
    Adjudication a = w.Run(smaller);
    REQUIRE(a.status != Status::kEscalated);
    int64_t before = 0;
    for (const Deduction &d : base.deductions) before += d.line == dropped ? 0 : d.amount;
    CHECK(a.DeductionTotal() <= before);
  }
}

}  // namespace
}  // namespace claims
