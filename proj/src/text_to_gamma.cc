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

#include "claims/text_to_gamma.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "claims/lowering.h"

namespace claims {
namespace {

bool IsWordByte(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '-' || u >= 0x80;
}

bool IsTerminator(const TaggedToken &t) {
  return t.kind == Token::Kind::kPunct && (t.form == "." || t.form == "!" || t.form == "?");
}

// ---------------------------------------------------------------------------
// Grammar

struct Rule {
  std::string lhs;
  std::vector<std::string> rhs;
};

constexpr char kGrammar[] = R"(
S -> CL | CL CONJ CL | ADV CL | ADV CL CONJ CL
CL -> NP VP
VP -> VFIN | DO VBASE | DO NEG VBASE | BE VPROG | BE NEG VPROG | BE PRED | BE NEG PRED
VP -> MOD VBASE | MOD NEG VBASE | WILL VBASE | WILL NEG VBASE
VFIN -> VI.FIN | VT.FIN NP | VPR.FIN P NP
VBASE -> VI.BASE | VT.BASE NP | VPR.BASE P NP
VPROG -> VI.PROG | VT.PROG NP | VPR.PROG P NP
PRED -> ADJ | DET NOM
NP -> PN | PRO | DET NOM | POSSNP NOM | NOM
POSSNP -> NP POSS
NOM -> NBAR | NBAR NDV | NDV
NBAR -> N | ADJ NBAR | N NBAR
ITEM -> NP | VT.BASE NP | VPR.BASE P NP
)";

const std::vector<Rule> &Grammar() {
  static const std::vector<Rule> kRules = [] {
    std::vector<Rule> rules;
    std::istringstream in(kGrammar);
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream words(line);
      std::string lhs;
      std::string arrow;
      if (!(words >> lhs >> arrow)) continue;
      Rule r{lhs, {}};
      std::string w;
      while (words >> w) {
        if (w == "|") {
          rules.push_back(r);
          r.rhs.clear();
        } else {
          r.rhs.push_back(w);
        }
      }
      rules.push_back(r);
    }
    return rules;
  }();
  return kRules;
}

// Preterminal categories of one analysis.
std::string Category(const MorphAnalysis &a) {
  const Lexeme &lx = *a.lexeme;
  switch (lx.word_class) {
    case WordClass::kNoun:
      return lx.Attribute("deverbal").empty() ? "N" : "NDV";
    case WordClass::kProperNoun: return "PN";
    case WordClass::kPron: return "PRO";
    case WordClass::kDet: return "DET";
    case WordClass::kAdj: return "ADJ";
    case WordClass::kAdv: return "ADV";
    case WordClass::kNeg: return "NEG";
    case WordClass::kPoss: return "POSS";
    case WordClass::kPrep: return "P";
    case WordClass::kConj: return "CONJ";
    case WordClass::kAux: {
      const std::string &aux = lx.Attribute("aux");
      if (aux == "do") return "DO";
      if (aux == "be") return "BE";
      if (aux == "modal") return "MOD";
      if (aux == "will") return "WILL";
      return "";
    }
    case WordClass::kVerb: {
      const VerbFeatures &vf = *lx.verb_features;
      std::string base = vf.transitivity == Transitivity::kIntransitive ? "VI"
                         : vf.preposition.empty()                      ? "VT"
                                                                       : "VPR";
      if (a.features.aspect == Aspect::kProgressive) return base + ".PROG";
      if (a.features.tense == Tense::kNone) return base + ".BASE";
      return base + ".FIN";
    }
  }
  return "";
}

class ChartParser {
 public:
  ChartParser(std::vector<const TaggedToken *> tokens, size_t cap)
      : tokens_(std::move(tokens)), cap_(cap) {
    for (const Rule &r : Grammar()) nonterminals_.insert(r.lhs);
  }

  const std::vector<TreePtr> &Parse(const std::string &sym, size_t i, size_t j) {
    auto key = std::make_tuple(sym, i, j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    memo_[key];  // placeholder; the grammar has no unit cycles
    std::vector<TreePtr> out;
    if (!nonterminals_.count(sym)) {
      if (j == i + 1) Leaves(sym, *tokens_[i], &out);
    } else {
      for (const Rule &r : Grammar()) {
        if (r.lhs != sym || r.rhs.size() > j - i) continue;
        std::vector<TreePtr> kids;
        Expand(r, 0, i, j, &kids, &out);
        if (out.size() >= cap_) break;
      }
    }
    return memo_[key] = std::move(out);
  }

 private:
  void Leaves(const std::string &sym, const TaggedToken &t, std::vector<TreePtr> *out) {
    if (t.kind == Token::Kind::kNumber) {
      if (sym == "DET") {
        auto leaf = std::make_shared<SyntaxTree>();
        leaf->symbol = sym;
        leaf->word = t.form;
        leaf->number = true;
        out->push_back(std::move(leaf));
      }
      return;
    }
    for (const MorphAnalysis &a : t.analyses) {
      if (Category(a) != sym) continue;
      auto leaf = std::make_shared<SyntaxTree>();
      leaf->symbol = sym;
      leaf->word = t.form;
      leaf->analysis = a;
      out->push_back(std::move(leaf));
    }
  }

  void Expand(const Rule &r, size_t k, size_t pos, size_t j, std::vector<TreePtr> *kids,
              std::vector<TreePtr> *out) {
    if (out->size() >= cap_) return;
    size_t remaining = r.rhs.size() - k - 1;
    if (remaining == 0) {
      for (const TreePtr &t : Parse(r.rhs[k], pos, j)) {
        kids->push_back(t);
        if (Acceptable(*kids)) {
          auto node = std::make_shared<SyntaxTree>();
          node->symbol = r.lhs;
          node->children = *kids;
          out->push_back(std::move(node));
        }
        kids->pop_back();
        if (out->size() >= cap_) return;
      }
      return;
    }
    for (size_t end = pos + 1; end + remaining <= j; ++end) {
      for (const TreePtr &t : Parse(r.rhs[k], pos, end)) {
        kids->push_back(t);
        Expand(r, k + 1, end, j, kids, out);
        kids->pop_back();
        if (out->size() >= cap_) return;
      }
    }
  }

  // A prepositional verb only combines with its own preposition.
  static bool Acceptable(const std::vector<TreePtr> &kids) {
    if (kids.size() == 3 && kids[0]->symbol.rfind("VPR.", 0) == 0) {
      return kids[0]->analysis.lexeme->verb_features->preposition == kids[1]->word;
    }
    return true;
  }

  std::vector<const TaggedToken *> tokens_;
  size_t cap_;
  std::set<std::string> nonterminals_;
  std::map<std::tuple<std::string, size_t, size_t>, std::vector<TreePtr>> memo_;
};

// ---------------------------------------------------------------------------
// Composition

GammaTense ToGammaTense(Tense t) {
  if (t == Tense::kPast) return GammaTense::kPast;
  if (t == Tense::kFuture) return GammaTense::kFuture;
  return GammaTense::kNone;
}

class Composer {
 public:
  Composer(DiscourseContext *ctx, int sentence, bool item)
      : ctx_(ctx), sentence_(sentence), item_(item) {}

  std::vector<Formula> Sentence(const SyntaxTree &s) {
    std::vector<std::vector<Formula>> per_clause;
    int clause = 0;
    for (const TreePtr &child : s.children) {
      if (child->symbol == "CL") per_clause.push_back(Clause(*child, clause++));
    }
    std::vector<std::vector<Formula>> combos = {{}};
    for (const auto &readings : per_clause) {
      std::vector<std::vector<Formula>> next;
      for (const auto &prefix : combos) {
        for (const Formula &r : readings) {
          std::vector<Formula> parts = prefix;
          for (const Formula &c : r.Conjuncts()) parts.push_back(c);
          next.push_back(std::move(parts));
        }
      }
      combos = std::move(next);
    }
    std::vector<Formula> out;
    for (const auto &parts : combos) out.push_back(Formula::Conjoin(parts));
    return Dedupe(out);
  }

  std::vector<Formula> Item(const SyntaxTree &item) {
    clause_ = 0;
    facts_.clear();
    store_.clear();
    const auto &kids = item.children;
    if (kids.size() == 1) {
      NP(*kids[0]);
    } else {
      // Imperative item: agentless unary verb predicate on the object.
      const SyntaxTree &verb = *kids[0];
      Term obj = NP(*kids.back());
      facts_.push_back(Formula::Pred(verb.analysis.lexeme->PredicateName(), {obj}));
    }
    return {Formula::Conjoin(facts_)};
  }

 private:
  struct Quant {
    bool forall = false;
    std::string var;
    Formula restriction;
  };

  struct Nominal {
    std::vector<Formula> facts;
    std::vector<std::string> sorts;
    std::string head;
    std::string gender;
    Number number = Number::kSingular;
  };

  static std::vector<Formula> Dedupe(const std::vector<Formula> &in) {
    std::vector<Formula> out;
    std::set<std::string> seen;
    for (const Formula &f : in) {
      if (seen.insert(Render(f)).second) out.push_back(f);
    }
    return out;
  }

  std::vector<Formula> Clause(const SyntaxTree &cl, int index) {
    clause_ = index;
    facts_.clear();
    store_.clear();
    Term subject = NP(*cl.children[0]);
    Formula core = VP(*cl.children[1], subject);
    std::vector<size_t> order(store_.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<Formula> readings;
    do {
      Formula f = core;
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const Quant &q = store_[*it];
        f = q.forall ? Formula::ForAll(q.var, Formula::Implies(q.restriction, f))
                     : Formula::Exists(q.var, Formula::And(q.restriction, f));
      }
      std::vector<Formula> parts = facts_;
      parts.push_back(f);
      readings.push_back(Formula::Conjoin(parts));
    } while (std::next_permutation(order.begin(), order.end()));
    return Dedupe(readings);
  }

  Referent &Register(const Term &var, const std::string &predicate) {
    Referent r;
    r.term = var;
    r.predicate = predicate;
    r.sentence = sentence_;
    r.mentions.push_back({sentence_, clause_});
    ctx_->referents.push_back(std::move(r));
    return ctx_->referents.back();
  }

  void AddMention(Referent *r) {
    Mention m{sentence_, clause_};
    if (std::find(r->mentions.begin(), r->mentions.end(), m) == r->mentions.end()) {
      r->mentions.push_back(m);
    }
  }

  // Composes a noun phrase. Free phrases add their restriction to facts_ and
  // become referents; quantified ones go to the store.
  Term NP(const SyntaxTree &np) {
    const auto &kids = np.children;
    const std::string &first = kids[0]->symbol;
    if (first == "PN") {
      const Lexeme &lx = *kids[0]->analysis.lexeme;
      std::string name = lx.PredicateName();
      for (Referent &r : ctx_->referents) {
        if (r.proper && r.predicate == name) {
          AddMention(&r);
          return r.term;
        }
      }
      Term x = ctx_->NewVariable();
      facts_.push_back(Formula::Pred(name, {x}));
      Referent &r = Register(x, name);
      r.proper = true;
      r.gender = lx.Attribute("gender");
      r.sorts = {name};
      return x;
    }
    if (first == "PRO") {
      const SyntaxTree &leaf = *kids[0];
      Term x = ctx_->NewVariable();
      Referent &r = Register(x, leaf.word);
      r.pronoun = true;
      r.gender = leaf.analysis.lexeme->Attribute("gender");
      if (leaf.analysis.features.number == Number::kPlural) r.number = Number::kPlural;
      return x;
    }
    if (first == "POSSNP") {
      Term x = ctx_->NewVariable();
      Nominal nom = Nom(*kids[1], x);
      RegisterFree(x, nom);
      Term owner = NP(*kids[0]->children[0]);
      if (std::any_of(store_.begin(), store_.end(),
                      [&](const Quant &q) { return q.var == owner.name; })) {
        throw CompositionError("quantified possessor is not supported");
      }
      facts_.push_back(Formula::Mod(x, owner, ModKind::kPossessive));
      return x;
    }
    std::string quant;
    const SyntaxTree *nom_tree = kids.back().get();
    if (first == "DET") {
      const SyntaxTree &det = *kids[0];
      quant = det.number ? "exists" : det.analysis.lexeme->Attribute("quant");
    }
    Term x = ctx_->NewVariable();
    Nominal nom = Nom(*nom_tree, x);
    if (item_ || (quant != "forall" && quant != "exists")) {
      RegisterFree(x, nom);
      return x;
    }
    store_.push_back({quant == "forall", x.name, Formula::Conjoin(nom.facts)});
    return x;
  }

  void RegisterFree(const Term &x, const Nominal &nom) {
    facts_.insert(facts_.end(), nom.facts.begin(), nom.facts.end());
    Referent &r = Register(x, nom.head);
    r.gender = nom.gender;
    r.number = nom.number;
    r.sorts = nom.sorts;
  }

  Nominal Nom(const SyntaxTree &t, const Term &x) {
    Nominal n;
    if (t.symbol == "NDV") {
      n.facts.push_back(Formula::Pred(t.analysis.lexeme->PredicateName(), {x}));
      n.head = t.analysis.lexeme->PredicateName();
      return n;
    }
    if (t.symbol == "NOM") {
      n = Nom(*t.children[0], x);
      if (t.children.size() == 2) {
        n.facts.push_back(Formula::Pred(t.children[1]->analysis.lexeme->PredicateName(), {x}));
      }
      return n;
    }
    // NBAR
    const auto &kids = t.children;
    if (kids.size() == 1) {
      const SyntaxTree &noun = *kids[0];
      const Lexeme &lx = *noun.analysis.lexeme;
      n.head = lx.PredicateName();
      n.facts.push_back(Formula::Pred(n.head, {x}));
      n.sorts.push_back(n.head);
      n.gender = lx.Attribute("gender");
      if (noun.analysis.features.number == Number::kPlural) n.number = Number::kPlural;
      return n;
    }
    if (kids[0]->symbol == "ADJ") {
      n = Nom(*kids[1], x);
      n.facts.insert(n.facts.begin(),
                     Formula::Pred(kids[0]->analysis.lexeme->PredicateName(), {x}));
      return n;
    }
    // Noun compound: the modifier gets its own variable.
    n = Nom(*kids[1], x);
    Term y = ctx_->NewVariable();
    n.facts.push_back(Formula::Pred(kids[0]->analysis.lexeme->PredicateName(), {y}));
    n.facts.push_back(Formula::Mod(x, y, ModKind::kAttributive));
    return n;
  }

  Formula VP(const SyntaxTree &vp, const Term &subject) {
    const auto &kids = vp.children;
    const SyntaxTree &head = *kids[0];
    bool negated = kids.size() == 3 && kids[1]->symbol == "NEG";
    const SyntaxTree &rest = *kids.back();
    if (head.symbol == "VFIN") {
      const SyntaxTree &verb = *head.children[0];
      return Verb(head, subject, verb.analysis.features.tense, false);
    }
    if (head.symbol == "DO") return Verb(rest, subject, head.analysis.features.tense, negated);
    if (head.symbol == "WILL") return Verb(rest, subject, Tense::kFuture, negated);
    if (head.symbol == "MOD") {
      Formula f = Verb(rest, subject, Tense::kPresent, negated);
      return head.analysis.lexeme->Attribute("modal") == "dia" ? Formula::Diamond(f)
                                                                : Formula::Box(f);
    }
    // BE
    if (rest.symbol == "VPROG") return Verb(rest, subject, head.analysis.features.tense, negated);
    Formula pred = Predicative(rest, subject);
    return negated ? Formula::Not(pred) : pred;
  }

  Formula Predicative(const SyntaxTree &pred, const Term &subject) {
    if (pred.children.size() == 1) {
      return Formula::Pred(pred.children[0]->analysis.lexeme->PredicateName(), {subject});
    }
    Nominal nom = Nom(*pred.children[1], subject);
    if (Referent *r = ctx_->FindReferent(subject.name)) {
      for (const std::string &s : nom.sorts) {
        if (std::find(r->sorts.begin(), r->sorts.end(), s) == r->sorts.end()) {
          r->sorts.push_back(s);
        }
      }
    }
    return Formula::Conjoin(nom.facts);
  }

  Formula Verb(const SyntaxTree &phrase, const Term &subject, Tense tense, bool negated) {
    const SyntaxTree &verb = *phrase.children[0];
    const Lexeme &lx = *verb.analysis.lexeme;
    const VerbFeatures &vf = *lx.verb_features;
    std::vector<Term> args = {subject};
    if (phrase.children.size() > 1) args.push_back(NP(*phrase.children.back()));
    VerbOccurrence occ;
    occ.id = static_cast<int>(ctx_->verbs.size()) + 1;
    occ.sentence = sentence_;
    occ.clause = clause_;
    occ.finite = true;
    occ.tense = tense == Tense::kNone ? Tense::kPresent : tense;
    occ.predicate = vf.predicate;
    occ.negated = negated;
    occ.intensional_capable = vf.intensional_capable;
    occ.presence_inducing = vf.presence_inducing;
    occ.args = args;
    ctx_->verbs.push_back(occ);
    Formula atom = Formula::Pred(vf.predicate, args, ToGammaTense(tense), false, occ.id);
    return negated ? Formula::Not(atom) : atom;
  }

  DiscourseContext *ctx_;
  int sentence_;
  bool item_;
  int clause_ = 0;
  std::vector<Formula> facts_;
  std::vector<Quant> store_;
};

// ---------------------------------------------------------------------------
// Discourse passes

Formula WithIntensional(const Formula &atom, bool intensional) {
  return Formula::Pred(atom.name(), atom.terms(), atom.tense(), intensional, atom.occurrence());
}

bool SortsCompatible(const std::vector<std::string> &a, const std::vector<std::string> &b,
                     const Ontology *ontology) {
  for (const std::string &sa : a) {
    for (const std::string &sb : b) {
      if (sa == sb) return true;
      if (ontology == nullptr) continue;
      if (ontology->taxonomy().Ancestors(sa).count(sb) ||
          ontology->taxonomy().Ancestors(sb).count(sa)) {
        return true;
      }
    }
  }
  return false;
}

int VarIndex(const std::string &name) { return std::stoi(name.substr(1)); }

Term RenameTerm(const Term &t, const std::map<std::string, std::string> &m) {
  if (t.is_variable()) {
    auto it = m.find(t.name);
    return it == m.end() ? t : Term::Variable(it->second);
  }
  if (t.kind == Term::Kind::kFunction) {
    std::vector<Term> args;
    for (const Term &a : t.args) args.push_back(RenameTerm(a, m));
    return Term::Function(t.name, std::move(args));
  }
  return t;
}

// Renames bound and free variables alike.
Formula RenameAll(const Formula &f, const std::map<std::string, std::string> &m) {
  using K = Formula::Kind;
  auto rename_var = [&](const std::string &v) {
    auto it = m.find(v);
    return it == m.end() ? v : it->second;
  };
  switch (f.kind()) {
    case K::kPred: {
      std::vector<Term> terms;
      for (const Term &t : f.terms()) terms.push_back(RenameTerm(t, m));
      return Formula::Pred(f.name(), terms, f.tense(), f.intensional(), f.occurrence());
    }
    case K::kMod:
      return Formula::Mod(RenameTerm(f.terms()[0], m), RenameTerm(f.terms()[1], m),
                          f.mod_kind());
    case K::kNot: return Formula::Not(RenameAll(f.child(0), m));
    case K::kAnd: return Formula::And(RenameAll(f.child(0), m), RenameAll(f.child(1), m));
    case K::kOr: return Formula::Or(RenameAll(f.child(0), m), RenameAll(f.child(1), m));
    case K::kImplies:
      return Formula::Implies(RenameAll(f.child(0), m), RenameAll(f.child(1), m));
    case K::kForAll: return Formula::ForAll(rename_var(f.var()), RenameAll(f.child(0), m));
    case K::kExists: return Formula::Exists(rename_var(f.var()), RenameAll(f.child(0), m));
    case K::kBox: return Formula::Box(RenameAll(f.child(0), m));
    case K::kDiamond: return Formula::Diamond(RenameAll(f.child(0), m));
    case K::kHigher: {
      std::vector<HigherArg> args;
      for (const HigherArg &a : f.higher_args()) {
        if (const Formula *g = std::get_if<Formula>(&a)) {
          args.push_back(RenameAll(*g, m));
        } else {
          args.push_back(RenameTerm(std::get<Term>(a), m));
        }
      }
      return Formula::Higher(f.name(), std::move(args));
    }
  }
  return f;
}

// Closes the gaps left by substitutions: variables are renumbered x1, x2, ...
// preserving their allocation order.
void Renumber(DiscourseContext *ctx) {
  std::set<std::string> used;
  for (const SentenceRecord &s : ctx->sentences) {
    for (const Formula &f : s.readings) CollectVariables(f, &used);
  }
  for (const Referent &r : ctx->referents) used.insert(r.term.name);
  for (const VerbOccurrence &v : ctx->verbs) {
    for (const Term &t : v.args) {
      if (t.is_variable()) used.insert(t.name);
    }
  }
  std::vector<std::string> sorted(used.begin(), used.end());
  std::sort(sorted.begin(), sorted.end(), [](const std::string &a, const std::string &b) {
    return VarIndex(a) < VarIndex(b);
  });
  std::map<std::string, std::string> m;
  for (size_t i = 0; i < sorted.size(); ++i) m[sorted[i]] = "x" + std::to_string(i + 1);
  for (SentenceRecord &s : ctx->sentences) {
    for (Formula &f : s.readings) f = RenameAll(f, m);
  }
  for (Referent &r : ctx->referents) r.term = RenameTerm(r.term, m);
  for (VerbOccurrence &v : ctx->verbs) {
    for (Term &t : v.args) t = RenameTerm(t, m);
  }
  ctx->next_variable = static_cast<int>(sorted.size()) + 1;
}

}  // namespace

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    if (c == '\'' && i + 1 < text.size() && (text[i + 1] == 's' || text[i + 1] == 'S') &&
        (i + 2 == text.size() || !IsWordByte(text[i + 2]))) {
      out.push_back({Token::Kind::kWord, std::string(text.substr(i, 2)), start});
      i += 2;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i + 1 < text.size() && text[i] == '.' &&
          std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      out.push_back({Token::Kind::kNumber, std::string(text.substr(start, i - start)), start});
    } else if (IsWordByte(c)) {
      while (i < text.size() &&
             (IsWordByte(text[i]) || std::isdigit(static_cast<unsigned char>(text[i])))) {
        ++i;
      }
      out.push_back({Token::Kind::kWord, std::string(text.substr(start, i - start)), start});
    } else {
      out.push_back({Token::Kind::kPunct, std::string(1, c), start});
      ++i;
    }
  }
  return out;
}

std::vector<TaggedToken> CorrectTokens(const std::vector<Token> &tokens,
                                       const Lexicon &lexicon, int max_edit) {
  std::vector<TaggedToken> fixed;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token &t = tokens[i];
    TaggedToken tt;
    tt.kind = t.kind;
    tt.surface = t.text;
    tt.form = t.text;
    tt.position = i;
    if (t.kind == Token::Kind::kWord) {
      CorrectionResult c = lexicon.Correct(t.text, max_edit);
      if (c.kind == CorrectionResult::Kind::kUnknown) throw UnknownTokenError(t.text, i);
      tt.form = ToLower(c.form);
      tt.distance = c.distance;
    }
    fixed.push_back(std::move(tt));
  }
  std::vector<TaggedToken> out;
  for (size_t i = 0; i < fixed.size();) {
    if (fixed[i].kind != Token::Kind::kWord) {
      out.push_back(fixed[i++]);
      continue;
    }
    std::vector<std::string> run;
    for (size_t k = i; k < fixed.size() && fixed[k].kind == Token::Kind::kWord; ++k) {
      run.push_back(fixed[k].form);
    }
    size_t n = std::max<size_t>(1, lexicon.MatchMultiword(run));
    TaggedToken tt = fixed[i];
    for (size_t k = 1; k < n; ++k) {
      tt.surface += " " + fixed[i + k].surface;
      tt.form += " " + fixed[i + k].form;
      tt.distance += fixed[i + k].distance;
    }
    tt.analyses = lexicon.Analyze(tt.form);
    out.push_back(std::move(tt));
    i += n;
  }
  return out;
}

std::string SyntaxTree::ToString() const {
  if (is_leaf()) return "(" + symbol + " " + word + ")";
  std::string out = "(" + symbol;
  for (const TreePtr &c : children) out += " " + c->ToString();
  return out + ")";
}

std::vector<TreePtr> ParseSyntax(const std::vector<TaggedToken> &tokens, StartSymbol start,
                                 size_t cap) {
  std::vector<const TaggedToken *> words;
  for (const TaggedToken &t : tokens) {
    if (t.kind == Token::Kind::kPunct && (IsTerminator(t) || t.form == ",")) continue;
    words.push_back(&t);
  }
  if (words.empty() || cap == 0) return {};
  ChartParser parser(words, cap);
  return parser.Parse(start == StartSymbol::kSentence ? "S" : "ITEM", 0, words.size());
}

std::vector<Formula> ComposeSemantics(const SyntaxTree &tree, int sentence,
                                      DiscourseContext *ctx, StartSymbol start) {
  if (!(tree.symbol == "S" && start == StartSymbol::kSentence) &&
      !(tree.symbol == "ITEM" && start == StartSymbol::kItem)) {
    throw CompositionError("tree root " + tree.symbol + " does not match start symbol");
  }
  Composer composer(ctx, sentence, start == StartSymbol::kItem);
  return start == StartSymbol::kItem ? composer.Item(tree) : composer.Sentence(tree);
}

void AnnotateIntensionality(DiscourseContext *ctx) {
  for (VerbOccurrence &v : ctx->verbs) {
    if (!v.intensional_capable || v.intensional || v.args.size() < 2) continue;
    const Term &object = v.args[1];
    bool anchored = std::any_of(ctx->verbs.begin(), ctx->verbs.end(), [&](const VerbOccurrence &w) {
      return w.sentence < v.sentence && w.negated && w.presence_inducing && !w.args.empty() &&
             w.args[0] == object;
    });
    if (!anchored) continue;
    v.intensional = true;
    ctx->RewriteOccurrence(v.id, [](const Formula &a) { return WithIntensional(a, true); });
    ctx->pending_intensional.push_back({v.id, v.sentence});
  }
}

void ResolveIntensional(DiscourseContext *ctx, const Ontology *ontology) {
  std::vector<PendingIntensional> still_pending;
  for (const PendingIntensional &p : ctx->pending_intensional) {
    const VerbOccurrence *v = ctx->FindVerb(p.occurrence);
    if (v == nullptr || v->args.size() < 2) continue;
    Term object = v->args[1];
    const Referent *obj_ref = ctx->FindReferent(object.name);
    bool fulfilled = false;
    for (const VerbOccurrence &w : ctx->verbs) {
      if (w.sentence <= p.sentence || w.negated || !w.presence_inducing || w.args.empty()) {
        continue;
      }
      const Term &subject = w.args[0];
      if (subject == object) {
        fulfilled = true;
        break;
      }
      const Referent *subj_ref = ctx->FindReferent(subject.name);
      if (obj_ref == nullptr || subj_ref == nullptr || subj_ref->pronoun) continue;
      if (!SortsCompatible(obj_ref->sorts, subj_ref->sorts, ontology)) continue;
      ctx->Substitute(subject.name, object);
      fulfilled = true;
      break;
    }
    if (!fulfilled) {
      still_pending.push_back(p);
      continue;
    }
    ctx->FindVerb(p.occurrence)->intensional = false;
    ctx->RewriteOccurrence(p.occurrence,
                           [](const Formula &a) { return WithIntensional(a, false); });
  }
  ctx->pending_intensional = std::move(still_pending);
}

void ResolveAnaphora(DiscourseContext *ctx, const Ontology *ontology, const Budget &budget) {
  std::vector<Clause> background;
  if (ontology != nullptr) background = Ontology::ToClauses(ontology->AllBackground());
  std::vector<std::string> pronouns;
  for (const Referent &r : ctx->referents) {
    if (r.pronoun) pronouns.push_back(r.term.name);
  }
  for (const std::string &p : pronouns) {
    const Referent *pr = ctx->FindReferent(p);
    if (pr == nullptr) continue;
    int s = pr->sentence;
    std::vector<Term> candidates;
    for (const Referent &r : ctx->referents) {
      if (r.pronoun || r.term.name == p) continue;
      bool in_window = std::any_of(r.mentions.begin(), r.mentions.end(), [&](const Mention &m) {
        return m.sentence <= s && m.sentence >= s - 2;
      });
      if (!in_window) continue;
      if (!pr->gender.empty() && !r.gender.empty() && pr->gender != r.gender) continue;
      if (pr->number != r.number) continue;
      // A pronoun is never a co-argument of its antecedent.
      bool co_argument = std::any_of(ctx->verbs.begin(), ctx->verbs.end(), [&](const VerbOccurrence &v) {
        bool has_p = std::any_of(v.args.begin(), v.args.end(),
                                 [&](const Term &t) { return t.is_variable() && t.name == p; });
        return has_p && std::find(v.args.begin(), v.args.end(), r.term) != v.args.end();
      });
      if (co_argument) continue;
      candidates.push_back(r.term);
    }
    if (ontology != nullptr && candidates.size() > 1) {
      std::vector<Formula> readings = ctx->DiscourseReadings();
      std::vector<Term> consistent;
      for (const Term &c : candidates) {
        bool ok = readings.empty();
        for (const Formula &reading : readings) {
          try {
            DeltaSet d = Lower(Substitute(reading, p, c), *ctx);
            std::vector<Clause> all = background;
            all.insert(all.end(), d.fol.begin(), d.fol.end());
            all.insert(all.end(), d.modal.begin(), d.modal.end());
            if (Refute(all, budget).verdict != Verdict::kProved) ok = true;
          } catch (const LoweringError &) {
            ok = true;
          }
          if (ok) break;
        }
        if (ok) consistent.push_back(c);
      }
      candidates = std::move(consistent);
    }
    if (candidates.size() == 1) {
      ctx->Substitute(p, candidates[0]);
    } else {
      ctx->flags.insert(kFlagAmbiguous);
    }
  }
}

GammaResult TextToGamma(std::string_view text, const Lexicon &lexicon,
                        const Ontology *ontology, const GammaOptions &options,
                        StartSymbol start) {
  GammaResult result;
  DiscourseContext &ctx = result.context;
  try {
    result.tokens = CorrectTokens(Tokenize(text), lexicon, options.max_edit);
  } catch (const UnknownTokenError &e) {
    result.unknown_token = e;
    ctx.flags.insert(kFlagUnknownToken);
    return result;
  }

  std::vector<std::vector<TaggedToken>> units(1);
  for (const TaggedToken &t : result.tokens) {
    units.back().push_back(t);
    if (start == StartSymbol::kSentence && IsTerminator(t)) units.emplace_back();
  }
  for (const auto &unit : units) {
    bool has_word = std::any_of(unit.begin(), unit.end(), [](const TaggedToken &t) {
      return t.kind != Token::Kind::kPunct;
    });
    if (!has_word) continue;
    SentenceRecord record;
    for (const TaggedToken &t : unit) {
      if (!record.text.empty() && t.kind != Token::Kind::kPunct) record.text += ' ';
      record.text += t.surface;
    }
    int index = static_cast<int>(ctx.sentences.size());
    std::vector<TreePtr> trees = ParseSyntax(unit, start);
    if (trees.empty()) {
      ctx.flags.insert(kFlagUnparseable);
      ctx.sentences.push_back(std::move(record));
      continue;
    }
    // Every tree composes against the same starting context; the first
    // tree's referents and verb occurrences are kept.
    DiscourseContext before = ctx;
    std::set<std::string> seen;
    try {
      for (size_t k = 0; k < trees.size(); ++k) {
        DiscourseContext scratch = before;
        DiscourseContext *target = k == 0 ? &ctx : &scratch;
        for (const Formula &f : ComposeSemantics(*trees[k], index, target, start)) {
          if (record.readings.size() >= options.max_readings) break;
          if (seen.insert(Render(f)).second) record.readings.push_back(f);
        }
      }
    } catch (const CompositionError &) {
      ctx = before;
      ctx.flags.insert(kFlagUnparseable);
      record.readings.clear();
    }
    ctx.sentences.push_back(std::move(record));
  }

  ResolveAnaphora(&ctx, ontology, options.budget);
  AnnotateIntensionality(&ctx);
  ResolveIntensional(&ctx, ontology);
  Renumber(&ctx);

  std::set<std::string> seen;
  for (const Formula &f : ctx.DiscourseReadings(options.max_readings)) {
    if (seen.insert(Render(f)).second) result.readings.push_back(f);
  }
  if (result.readings.empty()) ctx.flags.insert(kFlagUnparseable);
  return result;
}

}  // namespace claims
