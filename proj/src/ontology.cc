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

#include "claims/ontology.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "claims/lexicon.h"
#include "claims/lowering.h"

namespace claims {
namespace {

using Kind = OntologyError::Kind;

// Predicates the pipeline itself introduces; they need no declaration.
const std::set<std::string> &BuiltinPredicates() {
  static const std::set<std::string> kBuiltins = {"mod", "amod", "present", "acc",
                                                  "before"};
  return kBuiltins;
}

bool IsIdentifier(std::string_view s) {
  if (s.empty() || !(std::islower(static_cast<unsigned char>(s[0])))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) ||
           std::isdigit(static_cast<unsigned char>(c)) || c == '_';
  });
}

// Splits a directive line into fields. Double-quoted fields (optionally
// preceded by key=) keep their spaces.
std::vector<std::string> SplitFields(std::string_view line, const std::string &where) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::string field;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
      if (line[i] == '"') {
        size_t close = line.find('"', i + 1);
        if (close == std::string_view::npos) {
          throw OntologyError(Kind::kParse, where + ": unterminated quote");
        }
        field.append(line.substr(i + 1, close - i - 1));
        i = close + 1;
      } else {
        field.push_back(line[i++]);
      }
    }
    out.push_back(std::move(field));
  }
  return out;
}

void CollectPredicates(const Formula &f, std::set<std::string> *out) {
  switch (f.kind()) {
    case Formula::Kind::kPred:
      out->insert(f.name());
      return;
    case Formula::Kind::kMod:
      out->insert(f.mod_kind() == ModKind::kPossessive ? "mod" : "amod");
      return;
    default:
      for (const Formula &c : f.children()) CollectPredicates(c, out);
  }
}

bool HasReservedTerm(const Formula &f) {
  if (f.is_atomic()) {
    return std::any_of(f.terms().begin(), f.terms().end(), [](const Term &t) {
      return t.kind == Term::Kind::kSkolem || t.kind == Term::Kind::kEvent;
    });
  }
  return std::any_of(f.children().begin(), f.children().end(), HasReservedTerm);
}

std::vector<std::string> Words(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

std::string AxiomContext::ToString() const {
  if (is_wildcard()) return "*";
  return doc_type + "/" + subtype;
}

AxiomContext AxiomContext::Parse(std::string_view text) {
  AxiomContext c;
  if (text == "*") return c;
  size_t slash = text.find('/');
  c.doc_type = std::string(text.substr(0, slash));
  c.subtype = slash == std::string_view::npos ? "*" : std::string(text.substr(slash + 1));
  if (c.doc_type.empty() || c.doc_type == "*" || c.subtype.empty()) {
    throw OntologyError(Kind::kParse, "bad context '" + std::string(text) + "'");
  }
  return c;
}

std::set<std::string> Taxonomy::Nodes() const {
  std::set<std::string> out;
  for (const auto &[child, parents] : is_a) {
    out.insert(child);
    out.insert(parents.begin(), parents.end());
  }
  return out;
}

std::optional<std::string> Taxonomy::Root() const {
  std::optional<std::string> root;
  for (const std::string &n : Nodes()) {
    auto it = is_a.find(n);
    if (it != is_a.end() && !it->second.empty()) continue;
    if (root) return std::nullopt;
    root = n;
  }
  return root;
}

std::set<std::string> Taxonomy::Ancestors(const std::string &node) const {
  std::set<std::string> seen = {node};
  std::vector<std::string> stack = {node};
  while (!stack.empty()) {
    std::string n = stack.back();
    stack.pop_back();
    auto it = is_a.find(n);
    if (it == is_a.end()) continue;
    for (const std::string &p : it->second) {
      if (seen.insert(p).second) stack.push_back(p);
    }
  }
  return seen;
}

Ontology Ontology::Load(const std::string &path) { return LoadAll({path}); }

Ontology Ontology::LoadAll(const std::vector<std::string> &paths) {
  Ontology o;
  for (const std::string &path : paths) {
    std::ifstream in(path);
    if (!in) throw OntologyError(Kind::kIo, "cannot open ontology file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    o.ParseInto(buf.str(), path);
  }
  o.Validate();
  return o;
}

Ontology Ontology::Parse(std::string_view text, const std::string &source) {
  Ontology o;
  o.ParseInto(text, source);
  o.Validate();
  return o;
}

void Ontology::ParseInto(std::string_view text, const std::string &source) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string where = source + ":" + std::to_string(line_no);
    size_t hash = line.find('#');
    // '#' inside a quoted formula is not a comment, but formulas never use it.
    if (hash != std::string::npos) line.resize(hash);
    std::vector<std::string> f = SplitFields(line, where);
    if (f.empty()) continue;
    const std::string &directive = f[0];
    auto require_name = [&](const std::string &n) {
      if (!IsIdentifier(n) || IsReservedConstantName(n)) {
        throw OntologyError(Kind::kParse, where + ": bad or reserved name '" + n + "'");
      }
    };
    if (directive == "isa" || directive == "partof") {
      if (f.size() != 3) throw OntologyError(Kind::kParse, where + ": expected two names");
      require_name(f[1]);
      require_name(f[2]);
      auto &edges = directive == "isa" ? taxonomy_.is_a : taxonomy_.part_of;
      edges[f[1]].insert(f[2]);
    } else if (directive == "syn") {
      if (f.size() != 4 || (f[3] != "word" && f[3] != "phrase")) {
        throw OntologyError(Kind::kParse, where + ": expected syn <a> <b> word|phrase");
      }
      Synonym s{f[1], f[2], f[3] == "word" ? SynonymLevel::kWord : SynonymLevel::kPhrase};
      if (s.level == SynonymLevel::kWord) {
        require_name(s.a);
        require_name(s.b);
      } else {
        s.a = ToLower(s.a);
        s.b = ToLower(s.b);
        if (Words(s.a).empty() || Words(s.b).empty()) {
          throw OntologyError(Kind::kParse, where + ": empty phrase");
        }
      }
      synonyms_.push_back(std::move(s));
    } else if (directive == "extern") {
      if (f.size() != 2) throw OntologyError(Kind::kParse, where + ": expected extern name/arity");
      std::string name = f[1].substr(0, f[1].find('/'));
      require_name(name);
      externs_.insert(name);
    } else if (directive == "axiom") {
      if (f.size() < 3) throw OntologyError(Kind::kParse, where + ": axiom needs a name");
      OntologyAxiom ax;
      ax.name = f[1];
      require_name(ax.name);
      ax.provenance = where;
      bool have_formula = false;
      bool have_context = false;
      for (size_t i = 2; i < f.size(); ++i) {
        size_t eq = f[i].find('=');
        if (eq == std::string::npos) {
          throw OntologyError(Kind::kParse, where + ": expected key=value, got '" + f[i] + "'");
        }
        std::string key = f[i].substr(0, eq);
        std::string value = f[i].substr(eq + 1);
        if (key == "context") {
          ax.context = AxiomContext::Parse(value);
          have_context = true;
        } else if (key == "kind") {
          if (value == "classify") {
            ax.kind = AxiomKind::kClassify;
          } else if (value != "background") {
            throw OntologyError(Kind::kParse, where + ": unknown kind '" + value + "'");
          }
        } else if (key == "formula") {
          try {
            ax.formula = ParseFormula(value);
          } catch (const FormulaSyntaxError &e) {
            throw OntologyError(Kind::kParse, where + ": " + e.what());
          }
          have_formula = true;
        } else if (key == "source") {
          ax.provenance = value;
        } else {
          throw OntologyError(Kind::kParse, where + ": unknown key '" + key + "'");
        }
      }
      if (!have_formula || !have_context) {
        throw OntologyError(Kind::kParse, where + ": axiom needs context= and formula=");
      }
      if (ax.kind == AxiomKind::kClassify &&
          (ax.context.is_wildcard() || ax.context.subtype == "*")) {
        throw OntologyError(Kind::kParse,
                            where + ": classify axioms need a concrete type/subtype");
      }
      if (!FreeVariables(ax.formula).empty()) {
        throw OntologyError(Kind::kParse, where + ": axiom has free variables");
      }
      if (HasReservedTerm(ax.formula)) {
        throw OntologyError(Kind::kParse, where + ": reserved constant in axiom");
      }
      for (const OntologyAxiom &prev : axioms_) {
        if (prev.name == ax.name) {
          throw OntologyError(Kind::kDuplicateName, where + ": duplicate axiom name '" +
                                                        ax.name + "' (first at " +
                                                        prev.provenance + ")");
        }
      }
      axioms_.push_back(std::move(ax));
    } else {
      throw OntologyError(Kind::kParse, where + ": unknown directive '" + directive + "'");
    }
  }
}

void Ontology::Validate() const {
  // Acyclicity of both relations.
  for (const auto *edges : {&taxonomy_.is_a, &taxonomy_.part_of}) {
    std::map<std::string, int> state;  // 1 on stack, 2 done
    std::function<void(const std::string &)> visit = [&](const std::string &n) {
      int &s = state[n];
      if (s == 2) return;
      if (s == 1) throw OntologyError(Kind::kCycle, "cycle through '" + n + "'");
      s = 1;
      auto it = edges->find(n);
      if (it != edges->end()) {
        for (const std::string &p : it->second) visit(p);
      }
      state[n] = 2;
    };
    for (const auto &[n, parents] : *edges) visit(n);
  }
  std::set<std::string> nodes = taxonomy_.Nodes();
  if (!nodes.empty() && !taxonomy_.Root()) {
    throw OntologyError(Kind::kInvariant, "taxonomy must have exactly one root");
  }
  for (const auto &[part, wholes] : taxonomy_.part_of) {
    for (const std::string &n : wholes) {
      if (!nodes.count(n) || !nodes.count(part)) {
        throw OntologyError(Kind::kInvariant,
                            "partof " + part + " " + n + " uses a name outside the taxonomy");
      }
    }
  }
  std::set<std::string> declared = nodes;
  declared.insert(externs_.begin(), externs_.end());
  for (const Synonym &s : synonyms_) {
    if (s.level != SynonymLevel::kWord) continue;
    if (!nodes.count(s.a) && !nodes.count(s.b)) {
      throw OntologyError(Kind::kInvariant,
                          "synonym " + s.a + "/" + s.b + " names no taxonomy class");
    }
    declared.insert(s.a);
    declared.insert(s.b);
  }
  for (const OntologyAxiom &ax : axioms_) {
    std::set<std::string> preds;
    CollectPredicates(ax.formula, &preds);
    for (const std::string &p : preds) {
      if (!declared.count(p) && !BuiltinPredicates().count(p)) {
        throw OntologyError(Kind::kInvariant, ax.provenance + ": axiom " + ax.name +
                                                  " uses undeclared predicate '" + p + "'");
      }
    }
  }
}

std::vector<OntologyAxiom> Ontology::ClosureAxioms() const {
  std::vector<OntologyAxiom> out;
  Term x = Term::Var(1);
  auto unary = [&](const std::string &p) { return Formula::Pred(p, {x}); };
  for (const auto &[child, parents] : taxonomy_.is_a) {
    for (const std::string &p : parents) {
      OntologyAxiom ax;
      ax.name = "isa:" + child + ":" + p;
      ax.formula = Formula::ForAll("x1", Formula::Implies(unary(child), unary(p)));
      ax.provenance = "taxonomy";
      out.push_back(std::move(ax));
    }
  }
  for (const Synonym &s : synonyms_) {
    if (s.level != SynonymLevel::kWord) continue;
    for (int dir = 0; dir < 2; ++dir) {
      const std::string &from = dir == 0 ? s.a : s.b;
      const std::string &to = dir == 0 ? s.b : s.a;
      OntologyAxiom ax;
      ax.name = "syn:" + from + ":" + to;
      ax.formula = Formula::ForAll("x1", Formula::Implies(unary(from), unary(to)));
      ax.provenance = "synonym";
      out.push_back(std::move(ax));
    }
  }
  return out;
}

std::vector<OntologyAxiom> Ontology::SelectContext(const std::string &doc_type,
                                                   const std::string &subtype) const {
  std::vector<OntologyAxiom> out;
  for (const OntologyAxiom &ax : axioms_) {
    if (ax.kind != AxiomKind::kBackground) continue;
    const AxiomContext &c = ax.context;
    bool match = c.is_wildcard() || doc_type == "*" ||
                 (c.doc_type == doc_type &&
                  (c.subtype == "*" || subtype == "*" || c.subtype == subtype));
    if (match) out.push_back(ax);
  }
  std::vector<OntologyAxiom> closure = ClosureAxioms();
  out.insert(out.end(), closure.begin(), closure.end());
  return out;
}

std::vector<OntologyAxiom> Ontology::AllBackground() const { return SelectContext("*", "*"); }

std::vector<OntologyAxiom> Ontology::ClassificationAxioms() const {
  std::vector<OntologyAxiom> out;
  for (const OntologyAxiom &ax : axioms_) {
    if (ax.kind == AxiomKind::kClassify) out.push_back(ax);
  }
  return out;
}

std::vector<Clause> Ontology::ToClauses(const std::vector<OntologyAxiom> &axioms) {
  std::vector<Clause> out;
  SkolemCounter counter;
  for (const OntologyAxiom &ax : axioms) {
    std::vector<Clause> cs = ClausifyWithFunctions(ax.formula, &counter);
    out.insert(out.end(), cs.begin(), cs.end());
  }
  return out;
}

bool Ontology::AreSynonyms(const std::string &a, const std::string &b,
                           SynonymLevel level) const {
  return std::any_of(synonyms_.begin(), synonyms_.end(), [&](const Synonym &s) {
    return s.level == level && ((s.a == a && s.b == b) || (s.a == b && s.b == a));
  });
}

std::string Ontology::RewritePhrases(std::string_view text) const {
  std::map<std::string, std::string> canonical;
  for (const Synonym &s : synonyms_) {
    if (s.level == SynonymLevel::kPhrase) canonical.emplace(s.a, s.b);
  }
  if (canonical.empty()) return std::string(text);
  auto resolve = [&](std::string p) {
    std::set<std::string> visited = {p};
    for (auto it = canonical.find(p); it != canonical.end(); it = canonical.find(p)) {
      if (!visited.insert(it->second).second) break;
      p = it->second;
    }
    return p;
  };
  std::vector<std::pair<std::vector<std::string>, std::string>> phrases;
  for (const auto &[variant, unused] : canonical) {
    phrases.push_back({Words(variant), resolve(variant)});
  }
  // Longest phrases first so that overlapping variants prefer the longer one.
  std::stable_sort(phrases.begin(), phrases.end(), [](const auto &l, const auto &r) {
    return l.first.size() > r.first.size();
  });

  std::vector<std::string> words = Words(text);
  std::vector<std::string> lower;
  for (const std::string &w : words) lower.push_back(ToLower(w));
  std::vector<std::string> out;
  bool changed = false;
  size_t i = 0;
  while (i < words.size()) {
    bool matched = false;
    for (const auto &[phrase, rep] : phrases) {
      if (i + phrase.size() > words.size()) continue;
      if (!std::equal(phrase.begin(), phrase.end(), lower.begin() + i)) continue;
      out.push_back(rep);
      i += phrase.size();
      matched = true;
      changed = true;
      break;
    }
    if (!matched) out.push_back(words[i++]);
  }
  if (!changed) return std::string(text);
  std::string joined;
  for (size_t k = 0; k < out.size(); ++k) {
    if (k) joined += ' ';
    joined += out[k];
  }
  return joined;
}

std::set<std::string> Ontology::WholesOf(const std::string &predicate) const {
  auto it = taxonomy_.part_of.find(predicate);
  if (it == taxonomy_.part_of.end()) return {};
  return it->second;
}

ConsistencyResult CheckConsistency(const std::vector<OntologyAxiom> &axioms,
                                   const Budget &budget) {
  std::vector<std::vector<Clause>> per_axiom;
  SkolemCounter counter;
  for (const OntologyAxiom &ax : axioms) {
    per_axiom.push_back(ClausifyWithFunctions(ax.formula, &counter));
  }
  auto refute = [&](const std::vector<bool> &keep) {
    std::vector<Clause> all;
    for (size_t i = 0; i < per_axiom.size(); ++i) {
      if (keep[i]) all.insert(all.end(), per_axiom[i].begin(), per_axiom[i].end());
    }
    return Refute(all, budget).verdict;
  };
  ConsistencyResult result;
  std::vector<bool> keep(axioms.size(), true);
  Verdict v = refute(keep);
  if (v == Verdict::kTimeout) {
    result.verdict = ConsistencyResult::Verdict::kUnknown;
    return result;
  }
  if (v == Verdict::kRefuted) {
    result.verdict = ConsistencyResult::Verdict::kConsistent;
    return result;
  }
  result.verdict = ConsistencyResult::Verdict::kInconsistent;
  // Deletion-based minimisation; an axiom whose removal times out is kept.
  for (size_t i = 0; i < axioms.size(); ++i) {
    keep[i] = false;
    if (refute(keep) != Verdict::kProved) keep[i] = true;
  }
  for (size_t i = 0; i < axioms.size(); ++i) {
    if (keep[i]) result.core.push_back(axioms[i].name);
  }
  return result;
}

}  // namespace claims
