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

#include <algorithm>
#include <map>

#include "claims/lowering.h"
#include "claims/text_to_gamma.h"

namespace claims {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

BillError Malformed(const std::string &what) { return BillError("MALFORMED_BILL", what); }

Rational QuantityFromJson(const json &q) {
  if (q.is_number_integer()) return Rational(q.get<int64_t>());
  if (q.is_number_float()) return Rational::FromDouble(q.get<double>());
  if (q.is_string()) return Rational::Parse(q.get<std::string>());
  throw Malformed("qty must be a number or a numeric string");
}

int64_t MoneyFromJson(const json &j, const char *field) {
  const json &v = j.at(field);
  if (!v.is_number_integer()) throw Malformed(std::string(field) + " must be an integer");
  return v.get<int64_t>();
}

std::string OneLine(const std::vector<Clause> &clauses) {
  std::string s = ClausesToString(clauses);
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

std::string JoinInts(const std::vector<int> &v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

int64_t Cap(const BenchmarkLine &l) {
  return (l.max_quantity * Rational(l.max_unit_price)).RoundHalfUp();
}

// Excess of a single matched line over its benchmark line, split into the
// quantity part and the price part.
struct Excess {
  int64_t quantity = 0;
  int64_t price = 0;
  Rational quantity_over;
};

Excess LineExcess(const BillLine &b, const BenchmarkLine &q) {
  Excess e;
  Rational capped_qty = std::min(b.quantity, q.max_quantity);
  int64_t capped_price = std::min(b.unit_price, q.max_unit_price);
  int64_t at_capped_qty = (capped_qty * Rational(b.unit_price)).RoundHalfUp();
  e.quantity = b.line_total - at_capped_qty;
  e.price = at_capped_qty - (capped_qty * Rational(capped_price)).RoundHalfUp();
  if (b.quantity > q.max_quantity) e.quantity_over = b.quantity - q.max_quantity;
  return e;
}

const char *ClassificationName(Classification::Outcome o) {
  switch (o) {
    case Classification::Outcome::kClassified: return "classified";
    case Classification::Outcome::kUnclassified: return "unclassified";
    case Classification::Outcome::kTimeout: return "timeout";
  }
  return "?";
}

}  // namespace

int64_t Bill::Total() const {
  int64_t total = 0;
  for (const BillLine &l : lines) total += l.line_total;
  return total;
}

void Bill::Validate() const {
  if (id.empty()) throw BillError("INVALID_BILL", "empty bill id");
  if (lines.empty()) throw BillError("INVALID_BILL", "bill has no lines");
  std::set<int> seen;
  for (const BillLine &l : lines) {
    std::string at = "line " + std::to_string(l.pos) + ": ";
    if (l.pos <= 0 || !seen.insert(l.pos).second) {
      throw BillError("INVALID_BILL", at + "positions must be positive and unique");
    }
    if (l.quantity < Rational(0) || l.unit_price < 0 || l.line_total < 0) {
      throw BillError("INVALID_BILL", at + "negative amount");
    }
    int64_t expected = (l.quantity * Rational(l.unit_price)).RoundHalfUp();
    if (expected != l.line_total) {
      throw BillError("TOTAL_MISMATCH", at + "total " + std::to_string(l.line_total) +
                                            " != round(qty x unit price) = " +
                                            std::to_string(expected));
    }
  }
}

Bill Bill::FromJson(const json &j) {
  try {
    if (!j.is_object()) throw Malformed("bill must be a JSON object");
    Bill b;
    b.id = j.at("id").get<std::string>();
    b.date = j.at("date").get<std::string>();
    if (j.contains("free_text") && !j.at("free_text").is_null()) {
      b.free_text = j.at("free_text").get<std::string>();
    }
    const json &lines = j.at("lines");
    if (!lines.is_array()) throw Malformed("lines must be an array");
    for (const json &lj : lines) {
      BillLine l;
      if (!lj.at("pos").is_number_integer()) throw Malformed("pos must be an integer");
      l.pos = lj.at("pos").get<int>();
      l.text = lj.at("text").get<std::string>();
      l.quantity = QuantityFromJson(lj.at("qty"));
      l.unit_price = MoneyFromJson(lj, "unit_price_minor");
      l.line_total = MoneyFromJson(lj, "total_minor");
      b.lines.push_back(std::move(l));
    }
    return b;
  } catch (const json::exception &e) {
    throw Malformed(e.what());
  } catch (const std::invalid_argument &e) {
    throw Malformed(e.what());
  } catch (const std::overflow_error &e) {
    throw Malformed(e.what());
  }
}

Bill Bill::Parse(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception &e) {
    throw Malformed(e.what());
  }
  return FromJson(j);
}

ordered_json Bill::ToJson() const {
  ordered_json j;
  j["id"] = id;
  j["date"] = date;
  j["lines"] = ordered_json::array();
  for (const BillLine &l : lines) {
    j["lines"].push_back({{"pos", l.pos},
                          {"text", l.text},
                          {"qty", l.quantity.ToDecimalString()},
                          {"unit_price_minor", l.unit_price},
                          {"total_minor", l.line_total}});
  }
  if (free_text) j["free_text"] = *free_text;
  return j;
}

LineCompilation CompileLine(const std::string &text, const Lexicon &lexicon,
                            const Ontology &ontology, const AdjudicatorOptions &options) {
  LineCompilation out;
  out.rewritten_text = ontology.RewritePhrases(text);
  GammaOptions go;
  go.max_edit = options.max_edit;
  go.budget = options.budget;
  GammaResult r = TextToGamma(out.rewritten_text, lexicon, &ontology, go, StartSymbol::kItem);
  if (r.unknown_token) {
    out.error_code = "UNKNOWN_TOKEN";
    out.error_detail = "unknown token '" + r.unknown_token->token() + "'";
    return out;
  }
  if (r.context.flags.count(kFlagUnparseable) != 0 || r.readings.empty()) {
    out.error_code = "UNPARSEABLE";
    out.error_detail = "unparseable";
    return out;
  }
  if (r.context.flags.count(kFlagAmbiguous) != 0 || r.readings.size() > 1) {
    out.error_code = "AMBIGUOUS";
    out.error_detail = std::to_string(r.readings.size()) + " readings";
    return out;
  }
  try {
    DeltaSet d = Lower(r.readings[0], r.context);
    if (d.fol.empty()) {
      out.error_code = "UNPARSEABLE";
      out.error_detail = "no content";
      return out;
    }
    out.delta = std::move(d);
  } catch (const LoweringError &e) {
    out.error_code = "LOWERING_ERROR";
    out.error_detail = e.what();
  }
  return out;
}

Benchmark CompileBenchmark(const json &source, const Lexicon &lexicon, const Ontology &ontology,
                           const AdjudicatorOptions &options) {
  try {
    Benchmark b;
    b.doc_type = source.at("doc_type").get<std::string>();
    b.subtype = source.at("subtype").get<std::string>();
    b.source_doc = source.value("source_doc", "");
    for (const json &lj : source.at("lines")) {
      BenchmarkLine l;
      l.text = lj.at("text").get<std::string>();
      LineCompilation c = CompileLine(l.text, lexicon, ontology, options);
      if (!c.delta) {
        throw StoreError(StoreError::Kind::kInvalid,
                         "benchmark line '" + l.text + "': " + c.error_detail);
      }
      l.delta = *c.delta;
      l.max_quantity = QuantityFromJson(lj.at("max_quantity"));
      l.max_unit_price = MoneyFromJson(lj, "max_unit_price_minor");
      l.source = lj.value("source", "");
      b.lines.push_back(std::move(l));
    }
    b.Validate();
    return b;
  } catch (const json::exception &e) {
    throw StoreError(StoreError::Kind::kInvalid, std::string("benchmark source: ") + e.what());
  } catch (const BillError &e) {
    throw StoreError(StoreError::Kind::kInvalid, std::string("benchmark source: ") + e.what());
  }
}

BillVector Vectorize(const Bill &bill, const Lexicon &lexicon, const Ontology &ontology,
                     const AdjudicatorOptions &options) {
  BillVector v;
  for (const BillLine &line : bill.lines) {
    LineCompilation c = CompileLine(line.text, lexicon, ontology, options);
    if (c.delta) {
      for (const std::string &p : c.delta->Predicates()) v.doc_features.insert(p);
    } else {
      v.marks.push_back("line " + std::to_string(line.pos) + ": " + c.error_detail);
      v.mark_codes.push_back(c.error_code);
    }
    v.logical.push_back(std::move(c.delta));
    v.quantitative.push_back(line);
  }
  return v;
}

Classification Classify(const BillVector &v, const Ontology &ontology, const Budget &budget) {
  Classification out;
  std::vector<LineDelta> lines;
  for (size_t i = 0; i < v.logical.size(); ++i) {
    if (v.logical[i]) lines.push_back({v.quantitative[i].pos, *v.logical[i]});
  }
  if (lines.empty()) return out;
  std::vector<Clause> clauses = MergeLines(lines).clauses;
  std::vector<Clause> background = Ontology::ToClauses(ontology.AllBackground());
  clauses.insert(clauses.end(), background.begin(), background.end());
  const OntologyAxiom *hit = nullptr;
  for (const OntologyAxiom &axiom : ontology.ClassificationAxioms()) {
    ProofResult r = Entails(clauses, axiom.formula, budget);
    if (r.verdict == Verdict::kTimeout) {
      out.outcome = Classification::Outcome::kTimeout;
      out.hits.clear();
      return out;
    }
    if (r.verdict == Verdict::kProved) {
      out.hits.push_back(axiom.name);
      hit = &axiom;
    }
  }
  if (out.hits.size() == 1) {
    out.outcome = Classification::Outcome::kClassified;
    out.doc_type = hit->context.doc_type;
    out.subtype = hit->context.subtype;
  }
  return out;
}

std::optional<Benchmark> RetrieveBenchmark(const KnowledgeStore &kb, const std::string &doc_type,
                                           const std::string &subtype, const BillVector &v) {
  if (std::optional<Benchmark> exact = kb.GetBenchmark(doc_type, subtype)) return exact;
  std::optional<Benchmark> best;
  size_t best_overlap = 0;
  for (Benchmark &b : kb.Benchmarks()) {
    if (b.doc_type != doc_type) continue;
    std::set<std::string> features;
    for (const BenchmarkLine &l : b.lines) {
      for (const std::string &p : l.delta.Predicates()) features.insert(p);
    }
    size_t overlap = 0;
    for (const std::string &p : features) overlap += v.doc_features.count(p);
    // Benchmarks() is ordered by id, so strict > keeps the smaller id on ties.
    if (!best || overlap > best_overlap) {
      best = std::move(b);
      best_overlap = overlap;
    }
  }
  return best;
}

const char *StatusName(Status s) {
  switch (s) {
    case Status::kAutoApproved: return "AUTO_APPROVED";
    case Status::kAutoReduced: return "AUTO_REDUCED";
    case Status::kEscalated: return "ESCALATED";
  }
  return "?";
}

int64_t Adjudication::DeductionTotal() const {
  int64_t sum = 0;
  for (const Deduction &d : deductions) sum += d.amount;
  return sum;
}

ordered_json Adjudication::ToJson() const {
  ordered_json j;
  j["bill_id"] = bill_id;
  j["status"] = StatusName(status);
  if (status == Status::kEscalated) {
    j["reason"] = {{"code", reason_code}, {"detail", reason_detail}};
  } else {
    j["reason"] = nullptr;
  }
  if (doc_type.empty()) {
    j["classification"] = nullptr;
  } else {
    j["classification"] = {{"doc_type", doc_type}, {"subtype", subtype}};
  }
  j["benchmark"] = benchmark_id.empty() ? ordered_json(nullptr) : ordered_json(benchmark_id);
  j["total_minor"] = total;
  j["approved_minor"] = approved ? ordered_json(*approved) : ordered_json(nullptr);
  j["deductions"] = ordered_json::array();
  for (const Deduction &d : deductions) {
    j["deductions"].push_back({{"line", d.line},
                               {"code", d.code},
                               {"amount_minor", d.amount},
                               {"justification", d.justification}});
  }
  ordered_json assignment;
  assignment["pairs"] = ordered_json::array();
  bool review = false;
  for (const MatchedPair &p : pairs) {
    review = review || p.review;
    assignment["pairs"].push_back({{"bill_lines", p.bill_lines},
                                   {"benchmark_lines", p.benchmark_lines},
                                   {"score", p.score.ToDecimalString()},
                                   {"relation", EquivalenceName(p.relation)},
                                   {"review", p.review}});
  }
  assignment["unmatched_bill"] = unmatched_bill;
  assignment["unmatched_benchmark"] = unmatched_benchmark;
  j["assignment"] = std::move(assignment);
  j["review"] = review;
  j["trace"] = ordered_json::array();
  for (const TraceStep &t : trace) j["trace"].push_back({{"step", t.step}, {"detail", t.detail}});
  return j;
}

std::string FormatMoney(int64_t minor) {
  bool negative = minor < 0;
  uint64_t v = negative ? -static_cast<uint64_t>(minor) : static_cast<uint64_t>(minor);
  std::string cents = std::to_string(v % 100);
  if (cents.size() < 2) cents = "0" + cents;
  return (negative ? "-" : "") + std::to_string(v / 100) + "." + cents;
}

std::string Justify(const std::string &code, int64_t amount, const Rational &quantity_excess,
                    const Benchmark &benchmark, const BenchmarkLine *line) {
  std::string excerpt = line != nullptr && !line->source.empty() ? line->source
                                                                 : benchmark.source_doc;
  if (code == "NOT_COVERED") {
    return "Item not covered by benchmark " + benchmark.id() + ": " + benchmark.source_doc;
  }
  if (code == "PRICE_EXCESS") {
    return "Unit price exceeds benchmark maximum by " + FormatMoney(amount) + ": " + excerpt;
  }
  if (code == "QUANTITY_EXCESS") {
    return "Quantity exceeds benchmark maximum by " + quantity_excess.ToDecimalString() + ": " +
           excerpt;
  }
  return "Line group exceeds benchmark maximum by " + FormatMoney(amount) + ": " + excerpt;
}

Adjudication Adjudicate(const Bill &bill, const KnowledgeStore &kb, const Ontology &ontology,
                        const Lexicon &lexicon, const AdjudicatorOptions &options) {
  Adjudication a;
  a.bill_id = bill.id;
  a.total = bill.Total();
  auto escalate = [&](const std::string &code, const std::string &detail) {
    a.status = Status::kEscalated;
    a.reason_code = code;
    a.reason_detail = detail;
    a.approved.reset();
    a.deductions.clear();
    a.trace.push_back({"escalate", code + ": " + detail});
    return a;
  };

  try {
    bill.Validate();
  } catch (const BillError &e) {
    return escalate(e.code(), e.what());
  }
  a.trace.push_back({"validate", std::to_string(bill.lines.size()) + " lines, total " +
                                     std::to_string(a.total)});

  // Step 1: vectorize.
  BillVector v = Vectorize(bill, lexicon, ontology, options);
  for (size_t i = 0; i < bill.lines.size(); ++i) {
    std::string detail = "line " + std::to_string(bill.lines[i].pos) + ": ";
    detail += v.logical[i] ? OneLine(v.logical[i]->fol) : "failed";
    a.trace.push_back({"vectorize", detail});
  }
  if (!v.marks.empty()) {
    std::string detail;
    for (const std::string &m : v.marks) detail += (detail.empty() ? "" : "; ") + m;
    return escalate(v.mark_codes.front(), detail);
  }

  // Step 2: classify.
  Classification c = Classify(v, ontology, options.budget);
  std::string hits;
  for (const std::string &h : c.hits) hits += (hits.empty() ? "" : ",") + h;
  a.trace.push_back({"classify", std::string(ClassificationName(c.outcome)) +
                                     (hits.empty() ? "" : " " + hits)});
  if (c.outcome == Classification::Outcome::kTimeout) {
    return escalate("TIMEOUT", "classification proof exceeded its budget");
  }
  if (c.outcome == Classification::Outcome::kUnclassified) {
    return escalate("UNCLASSIFIED", c.hits.empty() ? "no classification axiom entailed"
                                                   : "entails " + hits);
  }
  a.doc_type = c.doc_type;
  a.subtype = c.subtype;

  // Step 3: retrieve.
  std::optional<Benchmark> bench = RetrieveBenchmark(kb, c.doc_type, c.subtype, v);
  if (!bench) return escalate("NOT_FOUND", "no benchmark for " + c.doc_type + "/" + c.subtype);
  a.benchmark_id = bench->id();
  a.trace.push_back({"retrieve", bench->id()});

  // Step 4: group and match.
  std::vector<LineDelta> bill_lines;
  std::map<int, const BillLine *> by_pos;
  for (size_t i = 0; i < bill.lines.size(); ++i) {
    bill_lines.push_back({bill.lines[i].pos, *v.logical[i]});
    by_pos[bill.lines[i].pos] = &bill.lines[i];
  }
  std::vector<LineDelta> bench_lines;
  for (size_t i = 0; i < bench->lines.size(); ++i) {
    bench_lines.push_back({static_cast<int>(i) + 1, bench->lines[i].delta});
  }
  std::vector<LineNode> bill_nodes = GroupLines(bill_lines, &ontology);
  std::vector<LineNode> bench_nodes = GroupLines(bench_lines, &ontology);
  std::vector<Clause> background =
      Ontology::ToClauses(ontology.SelectContext(c.doc_type, c.subtype));
  MatchGraph graph = BuildMatchGraph(bill_nodes, bench_nodes, background, options.budget);
  a.trace.push_back({"match", std::to_string(graph.bill_nodes.size()) + "x" +
                                  std::to_string(graph.bench_nodes.size()) + " nodes, " +
                                  std::to_string(graph.edges.size()) + " edges"});
  if (graph.incomplete) return escalate("INCOMPLETE_MATCH", "a line comparison timed out");
  Assignment assignment = SolveAssignment(graph);

  std::map<int, const LineNode *> bill_node;
  std::map<int, const LineNode *> bench_node;
  for (const LineNode &n : graph.bill_nodes) bill_node[n.id] = &n;
  for (const LineNode &n : graph.bench_nodes) bench_node[n.id] = &n;

  // Step 5: deduct.
  for (auto [b, q] : assignment.pairs) {
    const LineNode &bn = *bill_node.at(b);
    const LineNode &qn = *bench_node.at(q);
    const MatchEdge &edge = *graph.Edge(b, q);
    MatchedPair p{bn.lines, qn.lines, edge.score, edge.relation.relation,
                  edge.relation.relation != Equivalence::kEquivalent};
    a.trace.push_back({"pair", JoinInts(p.bill_lines) + " -> " + JoinInts(p.benchmark_lines) +
                                   " " + EquivalenceName(p.relation)});
    a.pairs.push_back(std::move(p));
    if (bn.lines.size() == 1 && qn.lines.size() == 1) {
      const BillLine &line = *by_pos.at(bn.lines[0]);
      const BenchmarkLine &ref = bench->lines[qn.lines[0] - 1];
      Excess e = LineExcess(line, ref);
      if (e.quantity > 0) {
        a.deductions.push_back({line.pos, e.quantity, "QUANTITY_EXCESS",
                                Justify("QUANTITY_EXCESS", e.quantity, e.quantity_over, *bench,
                                        &ref)});
      }
      if (e.price > 0) {
        a.deductions.push_back({line.pos, e.price, "PRICE_EXCESS",
                                Justify("PRICE_EXCESS", line.unit_price - ref.max_unit_price,
                                        Rational(0), *bench, &ref)});
      }
    } else {
      int64_t billed = 0;
      for (int pos : bn.lines) billed += by_pos.at(pos)->line_total;
      int64_t cap = 0;
      for (int id : qn.lines) cap += Cap(bench->lines[id - 1]);
      if (billed > cap) {
        const BenchmarkLine &ref = bench->lines[qn.lines[0] - 1];
        a.deductions.push_back({bn.id, billed - cap, "GROUP_EXCESS",
                                Justify("GROUP_EXCESS", billed - cap, Rational(0), *bench, &ref)});
      }
    }
  }
  for (int id : assignment.unmatched_bill) {
    for (int pos : bill_node.at(id)->lines) {
      const BillLine &line = *by_pos.at(pos);
      a.unmatched_bill.push_back(pos);
      if (line.line_total > 0) {
        a.deductions.push_back({pos, line.line_total, "NOT_COVERED",
                                Justify("NOT_COVERED", line.line_total, Rational(0), *bench,
                                        nullptr)});
      }
    }
  }
  for (int id : assignment.unmatched_benchmark) {
    for (int line : bench_node.at(id)->lines) a.unmatched_benchmark.push_back(line);
  }
  std::sort(a.unmatched_bill.begin(), a.unmatched_bill.end());
  std::stable_sort(a.deductions.begin(), a.deductions.end(),
                   [](const Deduction &x, const Deduction &y) { return x.line < y.line; });

  // Step 6: decide.
  a.approved = a.total - a.DeductionTotal();
  a.status = a.deductions.empty() ? Status::kAutoApproved : Status::kAutoReduced;
  a.trace.push_back({"decide", std::string(StatusName(a.status)) + " approved " +
                                   std::to_string(*a.approved) + " deducted " +
                                   std::to_string(a.DeductionTotal())});
  return a;
}

Adjudication AdjudicateDocument(std::string_view json_text, const KnowledgeStore &kb,
                                const Ontology &ontology, const Lexicon &lexicon,
                                const AdjudicatorOptions &options) {
  Bill bill;
  try {
    bill = Bill::Parse(json_text);
  } catch (const BillError &e) {
    Adjudication a;
    a.status = Status::kEscalated;
    a.reason_code = e.code();
    a.reason_detail = e.what();
    a.trace.push_back({"escalate", a.reason_code + ": " + a.reason_detail});
    return a;
  }
  return Adjudicate(bill, kb, ontology, lexicon, options);
}

}  // namespace claims
