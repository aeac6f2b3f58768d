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

#include "claims/formula.h"

#include <cctype>
#include <map>
#include <tuple>

namespace claims {

namespace {

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool HasNumberedPrefix(std::string_view name, std::string_view prefix) {
  return name.size() > prefix.size() && name.substr(0, prefix.size()) == prefix &&
         AllDigits(name.substr(prefix.size()));
}

bool IsVariableName(std::string_view name) {
  return HasNumberedPrefix(name, "x");
}

}  // namespace

Term Term::Variable(std::string name) {
  Term t;
  t.kind = Kind::kVariable;
  t.name = std::move(name);
  return t;
}

Term Term::Constant(std::string name) {
  Term t;
  t.kind = Kind::kConstant;
  t.name = std::move(name);
  return t;
}

Term Term::Skolem(int id) {
  Term t;
  t.kind = Kind::kSkolem;
  t.id = id;
  return t;
}

Term Term::Event(int id) {
  Term t;
  t.kind = Kind::kEvent;
  t.id = id;
  return t;
}

Term Term::Function(std::string name, std::vector<Term> args) {
  Term t;
  t.kind = Kind::kFunction;
  t.name = std::move(name);
  t.args = std::move(args);
  return t;
}

bool Term::is_ground() const {
  if (kind == Kind::kVariable) return false;
  for (const Term &a : args) {
    if (!a.is_ground()) return false;
  }
  return true;
}

std::string Term::ToString() const {
  switch (kind) {
    case Kind::kVariable:
    case Kind::kConstant:
      return name;
    case Kind::kSkolem:
      return "sk" + std::to_string(id);
    case Kind::kEvent:
      return "e" + std::to_string(id);
    case Kind::kFunction: {
      std::string out = name + "(";
      for (size_t i = 0; i < args.size(); ++i) {
        if (i > 0) out += ",";
        out += args[i].ToString();
      }
      return out + ")";
    }
  }
  return name;
}

bool Term::operator==(const Term &other) const {
  return kind == other.kind && name == other.name && id == other.id &&
         args == other.args;
}

bool Term::operator<(const Term &other) const {
  return std::tie(kind, name, id, args) <
         std::tie(other.kind, other.name, other.id, other.args);
}

bool IsReservedConstantName(std::string_view name) {
  return HasNumberedPrefix(name, "sk") || HasNumberedPrefix(name, "skf") ||
         HasNumberedPrefix(name, "e") || HasNumberedPrefix(name, "x");
}

namespace {

// Shared lexer for formulae and terms.
class FormulaLexer {
 public:
  enum class Tok { kIdent, kLParen, kRParen, kComma, kArrow, kEnd };

  explicit FormulaLexer(std::string_view text) : text_(text) { Advance(); }

  Tok tok() const { return tok_; }
  const std::string &ident() const { return ident_; }
  size_t offset() const { return start_; }

  // Peeks whether the character after the current token is '('.
  bool NextIsParen() const {
    size_t p = pos_;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() && text_[p] == '(';
  }

  void Advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    start_ = pos_;
    if (pos_ >= text_.size()) {
      tok_ = Tok::kEnd;
      return;
    }
    char c = text_[pos_];
    if (c == '(') {
      tok_ = Tok::kLParen;
      ++pos_;
    } else if (c == ')') {
      tok_ = Tok::kRParen;
      ++pos_;
    } else if (c == ',') {
      tok_ = Tok::kComma;
      ++pos_;
    } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      tok_ = Tok::kArrow;
      pos_ += 2;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) ||
              text_[end] == '_')) {
        ++end;
      }
      ident_ = std::string(text_.substr(pos_, end - pos_));
      tok_ = Tok::kIdent;
      pos_ = end;
    } else {
      throw FormulaSyntaxError(std::string("unexpected character '") + c + "'",
                               pos_);
    }
  }

  void Expect(Tok t, const char *what) {
    if (tok_ != t) throw FormulaSyntaxError(std::string("expected ") + what, start_);
    Advance();
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  size_t start_ = 0;
  Tok tok_ = Tok::kEnd;
  std::string ident_;
};

bool IsKeyword(const std::string &s) {
  return s == "forall" || s == "exists" || s == "not" || s == "and" ||
         s == "or" || s == "box" || s == "dia";
}

Term MakeNamedTerm(const std::string &name, bool bound) {
  if (bound || IsVariableName(name)) return Term::Variable(name);
  if (HasNumberedPrefix(name, "sk") && !HasNumberedPrefix(name, "skf")) {
    return Term::Skolem(std::stoi(name.substr(2)));
  }
  if (HasNumberedPrefix(name, "e")) return Term::Event(std::stoi(name.substr(1)));
  return Term::Constant(name);
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : lex_(text) {}

  Formula ParseTop() {
    Formula f = ParseChain();
    if (lex_.tok() != FormulaLexer::Tok::kEnd) {
      throw FormulaSyntaxError("trailing input", lex_.offset());
    }
    return f;
  }

  Term ParseTopTerm() {
    Term t = ParseTermAt();
    if (lex_.tok() != FormulaLexer::Tok::kEnd) {
      throw FormulaSyntaxError("trailing input", lex_.offset());
    }
    return t;
  }

 private:
  bool AtIdent(const char *word) const {
    return lex_.tok() == FormulaLexer::Tok::kIdent && lex_.ident() == word;
  }

  Formula ParseChain() {
    Formula first = ParseUnit();
    if (AtIdent("and") || AtIdent("or")) {
      std::string op = lex_.ident();
      Formula acc = first;
      while (lex_.tok() == FormulaLexer::Tok::kIdent &&
             (lex_.ident() == "and" || lex_.ident() == "or")) {
        if (lex_.ident() != op) {
          throw FormulaSyntaxError("mixed connectives need parentheses",
                                   lex_.offset());
        }
        lex_.Advance();
        Formula next = ParseUnit();
        acc = op == "and" ? Formula::And(acc, next) : Formula::Or(acc, next);
      }
      if (lex_.tok() == FormulaLexer::Tok::kArrow) {
        throw FormulaSyntaxError("mixed connectives need parentheses",
                                 lex_.offset());
      }
      return acc;
    }
    if (lex_.tok() == FormulaLexer::Tok::kArrow) {
      lex_.Advance();
      Formula rhs = ParseUnit();
      if (lex_.tok() == FormulaLexer::Tok::kArrow || AtIdent("and") ||
          AtIdent("or")) {
        throw FormulaSyntaxError("chained implication needs parentheses",
                                 lex_.offset());
      }
      return Formula::Implies(first, rhs);
    }
    return first;
  }

  Formula ParseUnit() {
    using Tok = FormulaLexer::Tok;
    if (lex_.tok() == Tok::kLParen) {
      lex_.Advance();
      Formula f = ParseChain();
      lex_.Expect(Tok::kRParen, "')'");
      return f;
    }
    if (lex_.tok() != Tok::kIdent) {
      throw FormulaSyntaxError("expected formula", lex_.offset());
    }
    const std::string word = lex_.ident();
    if (word == "not") {
      lex_.Advance();
      return Formula::Not(ParseUnit());
    }
    if (word == "box") {
      lex_.Advance();
      return Formula::Box(ParseUnit());
    }
    if (word == "dia") {
      lex_.Advance();
      return Formula::Diamond(ParseUnit());
    }
    if (word == "forall" || word == "exists") {
      lex_.Advance();
      if (lex_.tok() != Tok::kIdent || IsKeyword(lex_.ident())) {
        throw FormulaSyntaxError("expected quantified variable", lex_.offset());
      }
      std::string var = lex_.ident();
      lex_.Advance();
      lex_.Expect(Tok::kLParen, "'(' after quantified variable");
      bound_.push_back(var);
      Formula body = ParseChain();
      bound_.pop_back();
      lex_.Expect(Tok::kRParen, "')'");
      return word == "forall" ? Formula::ForAll(var, body)
                              : Formula::Exists(var, body);
    }
    if (IsKeyword(word)) {
      throw FormulaSyntaxError("unexpected keyword '" + word + "'", lex_.offset());
    }
    return ParseAtom();
  }

  bool IsBound(const std::string &name) const {
    for (const auto &b : bound_) {
      if (b == name) return true;
    }
    return false;
  }

  Term ParseTermAt() {
    using Tok = FormulaLexer::Tok;
    if (lex_.tok() != Tok::kIdent || IsKeyword(lex_.ident())) {
      throw FormulaSyntaxError("expected term", lex_.offset());
    }
    std::string name = lex_.ident();
    bool fn = lex_.NextIsParen();
    lex_.Advance();
    if (fn) {
      lex_.Expect(Tok::kLParen, "'('");
      std::vector<Term> args;
      args.push_back(ParseTermAt());
      while (lex_.tok() == Tok::kComma) {
        lex_.Advance();
        args.push_back(ParseTermAt());
      }
      lex_.Expect(Tok::kRParen, "')'");
      return Term::Function(name, std::move(args));
    }
    return MakeNamedTerm(name, IsBound(name));
  }

  HigherArg ParseArg() {
    using Tok = FormulaLexer::Tok;
    if (lex_.tok() == Tok::kLParen) return ParseChain();
    if (lex_.tok() != Tok::kIdent) {
      throw FormulaSyntaxError("expected argument", lex_.offset());
    }
    const std::string &word = lex_.ident();
    if (IsKeyword(word)) return ParseChain();
    if (lex_.NextIsParen() && !HasNumberedPrefix(word, "skf")) return ParseChain();
    return ParseTermAt();
  }

  Formula ParseAtom() {
    using Tok = FormulaLexer::Tok;
    std::string name = lex_.ident();
    size_t at = lex_.offset();
    lex_.Advance();
    bool intensional = false;
    GammaTense tense = GammaTense::kNone;
    auto strip = [&name](const char *suffix) {
      size_t n = std::char_traits<char>::length(suffix);
      if (name.size() > n && name.compare(name.size() - n, n, suffix) == 0) {
        name.resize(name.size() - n);
        return true;
      }
      return false;
    };
    if (strip("_i")) intensional = true;
    if (strip("_p")) {
      tense = GammaTense::kPast;
    } else if (strip("_f")) {
      tense = GammaTense::kFuture;
    }
    std::vector<HigherArg> args;
    if (lex_.tok() == Tok::kLParen) {
      lex_.Advance();
      args.push_back(ParseArg());
      while (lex_.tok() == Tok::kComma) {
        lex_.Advance();
        args.push_back(ParseArg());
      }
      lex_.Expect(Tok::kRParen, "')'");
    }
    bool all_terms = true;
    for (const auto &a : args) {
      if (!std::holds_alternative<Term>(a)) all_terms = false;
    }
    if (!all_terms) {
      if (tense != GammaTense::kNone || intensional) {
        throw FormulaSyntaxError("higher-order predicate with subscript", at);
      }
      return Formula::Higher(name, std::move(args));
    }
    std::vector<Term> terms;
    for (auto &a : args) terms.push_back(std::get<Term>(std::move(a)));
    if ((name == "mod" || name == "amod") && terms.size() == 2 &&
        tense == GammaTense::kNone && !intensional) {
      return Formula::Mod(terms[0], terms[1],
                          name == "mod" ? ModKind::kPossessive
                                        : ModKind::kAttributive);
    }
    return Formula::Pred(name, std::move(terms), tense, intensional);
  }

  FormulaLexer lex_;
  std::vector<std::string> bound_;
};

}  // namespace

Term ParseTerm(std::string_view text) {
  FormulaParser parser(text);
  return parser.ParseTopTerm();
}

Formula Formula::Make(Node node) {
  return Formula(std::make_shared<const Node>(std::move(node)));
}

Formula Formula::Pred(std::string name, std::vector<Term> args,
                      GammaTense tense, bool intensional,
                      std::optional<int> occurrence) {
  Node n;
  n.kind = Kind::kPred;
  n.name = std::move(name);
  n.terms = std::move(args);
  n.tense = tense;
  n.intensional = intensional;
  n.occurrence = occurrence;
  return Make(std::move(n));
}

Formula Formula::Mod(Term x, Term y, ModKind kind) {
  Node n;
  n.kind = Kind::kMod;
  n.name = kind == ModKind::kPossessive ? "mod" : "amod";
  n.terms = {std::move(x), std::move(y)};
  n.mod_kind = kind;
  return Make(std::move(n));
}

Formula Formula::Not(Formula f) {
  Node n;
  n.kind = Kind::kNot;
  n.children = {std::move(f)};
  return Make(std::move(n));
}

Formula Formula::And(Formula f, Formula g) {
  Node n;
  n.kind = Kind::kAnd;
  n.children = {std::move(f), std::move(g)};
  return Make(std::move(n));
}

Formula Formula::Or(Formula f, Formula g) {
  Node n;
  n.kind = Kind::kOr;
  n.children = {std::move(f), std::move(g)};
  return Make(std::move(n));
}

Formula Formula::Implies(Formula f, Formula g) {
  Node n;
  n.kind = Kind::kImplies;
  n.children = {std::move(f), std::move(g)};
  return Make(std::move(n));
}

Formula Formula::ForAll(std::string var, Formula f) {
  Node n;
  n.kind = Kind::kForAll;
  n.name = std::move(var);
  n.children = {std::move(f)};
  return Make(std::move(n));
}

Formula Formula::Exists(std::string var, Formula f) {
  Node n;
  n.kind = Kind::kExists;
  n.name = std::move(var);
  n.children = {std::move(f)};
  return Make(std::move(n));
}

Formula Formula::Higher(std::string name, std::vector<HigherArg> args) {
  Node n;
  n.kind = Kind::kHigher;
  n.name = std::move(name);
  n.higher_args = std::move(args);
  return Make(std::move(n));
}

Formula Formula::Box(Formula f) {
  Node n;
  n.kind = Kind::kBox;
  n.children = {std::move(f)};
  return Make(std::move(n));
}

Formula Formula::Diamond(Formula f) {
  Node n;
  n.kind = Kind::kDiamond;
  n.children = {std::move(f)};
  return Make(std::move(n));
}

Formula Formula::Conjoin(const std::vector<Formula> &parts) {
  if (parts.empty()) throw std::invalid_argument("Conjoin of empty list");
  Formula acc = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) acc = And(acc, parts[i]);
  return acc;
}

std::vector<Formula> Formula::Conjuncts() const {
  std::vector<Formula> out;
  const Formula *cur = this;
  std::vector<const Formula *> rights;
  while (cur->kind() == Kind::kAnd) {
    rights.push_back(&cur->child(1));
    cur = &cur->child(0);
  }
  out.push_back(*cur);
  for (auto it = rights.rbegin(); it != rights.rend(); ++it) out.push_back(**it);
  return out;
}

bool Formula::operator==(const Formula &other) const {
  if (node_ == other.node_) return true;
  const Node &a = *node_;
  const Node &b = *other.node_;
  if (a.kind != b.kind || a.name != b.name || a.terms != b.terms ||
      a.tense != b.tense || a.intensional != b.intensional ||
      a.mod_kind != b.mod_kind || a.occurrence != b.occurrence ||
      a.children.size() != b.children.size() ||
      a.higher_args.size() != b.higher_args.size()) {
    return false;
  }
  for (size_t i = 0; i < a.children.size(); ++i) {
    if (a.children[i] != b.children[i]) return false;
  }
  for (size_t i = 0; i < a.higher_args.size(); ++i) {
    if (a.higher_args[i].index() != b.higher_args[i].index()) return false;
    if (std::holds_alternative<Term>(a.higher_args[i])) {
      if (std::get<Term>(a.higher_args[i]) != std::get<Term>(b.higher_args[i])) {
        return false;
      }
    } else if (std::get<Formula>(a.higher_args[i]) !=
               std::get<Formula>(b.higher_args[i])) {
      return false;
    }
  }
  return true;
}

namespace {

std::string RenderUnit(const Formula &f);
std::string RenderTop(const Formula &f);

std::string RenderAtomName(const Formula &f) {
  std::string out = f.name();
  if (f.tense() == GammaTense::kPast) out += "_p";
  if (f.tense() == GammaTense::kFuture) out += "_f";
  if (f.intensional()) out += "_i";
  return out;
}

std::string RenderTerms(const std::vector<Term> &terms) {
  std::string out = "(";
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i > 0) out += ",";
    out += terms[i].ToString();
  }
  return out + ")";
}

std::string RenderChain(const Formula &f) {
  using Kind = Formula::Kind;
  if (f.kind() == Kind::kImplies) {
    return RenderUnit(f.child(0)) + " -> " + RenderUnit(f.child(1));
  }
  const char *op = f.kind() == Kind::kAnd ? " and " : " or ";
  std::vector<const Formula *> rights;
  const Formula *cur = &f;
  while (cur->kind() == f.kind()) {
    rights.push_back(&cur->child(1));
    cur = &cur->child(0);
  }
  std::string out = RenderUnit(*cur);
  for (auto it = rights.rbegin(); it != rights.rend(); ++it) {
    out += op;
    out += RenderUnit(**it);
  }
  return out;
}

std::string RenderUnit(const Formula &f) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::kPred:
      return f.terms().empty() ? RenderAtomName(f)
                               : RenderAtomName(f) + RenderTerms(f.terms());
    case Kind::kMod:
      return f.name() + RenderTerms(f.terms());
    case Kind::kNot:
      return "not " + RenderUnit(f.child(0));
    case Kind::kBox:
      return "box " + RenderUnit(f.child(0));
    case Kind::kDiamond:
      return "dia " + RenderUnit(f.child(0));
    case Kind::kAnd:
    case Kind::kOr:
    case Kind::kImplies:
      return "(" + RenderChain(f) + ")";
    case Kind::kForAll:
      return "forall " + f.var() + " (" + RenderTop(f.child(0)) + ")";
    case Kind::kExists:
      return "exists " + f.var() + " (" + RenderTop(f.child(0)) + ")";
    case Kind::kHigher: {
      std::string out = f.name() + "(";
      for (size_t i = 0; i < f.higher_args().size(); ++i) {
        if (i > 0) out += ",";
        const HigherArg &a = f.higher_args()[i];
        if (std::holds_alternative<Term>(a)) {
          out += std::get<Term>(a).ToString();
        } else {
          const Formula &g = std::get<Formula>(a);
          bool bare_atom = g.kind() == Kind::kPred && g.terms().empty();
          out += bare_atom ? "(" + RenderUnit(g) + ")" : RenderTop(g);
        }
      }
      return out + ")";
    }
  }
  return "";
}

std::string RenderTop(const Formula &f) {
  return f.is_binary() ? RenderChain(f) : RenderUnit(f);
}

}  // namespace

std::string Render(const Formula &f) { return RenderTop(f); }

Formula ParseFormula(std::string_view text) {
  FormulaParser parser(text);
  return parser.ParseTop();
}

namespace {

Formula Rebuild(const Formula &f, std::vector<Formula> children) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::kNot:
      return Formula::Not(children[0]);
    case Kind::kBox:
      return Formula::Box(children[0]);
    case Kind::kDiamond:
      return Formula::Diamond(children[0]);
    case Kind::kAnd:
      return Formula::And(children[0], children[1]);
    case Kind::kOr:
      return Formula::Or(children[0], children[1]);
    case Kind::kImplies:
      return Formula::Implies(children[0], children[1]);
    case Kind::kForAll:
      return Formula::ForAll(f.var(), children[0]);
    case Kind::kExists:
      return Formula::Exists(f.var(), children[0]);
    default:
      return f;
  }
}

Term SubstituteTerm(const Term &t, const std::string &var, const Term &rep) {
  if (t.kind == Term::Kind::kVariable && t.name == var) return rep;
  if (t.kind == Term::Kind::kFunction) {
    Term out = t;
    for (Term &a : out.args) a = SubstituteTerm(a, var, rep);
    return out;
  }
  return t;
}

Formula WithTerms(const Formula &f, std::vector<Term> terms) {
  if (f.kind() == Formula::Kind::kMod) {
    return Formula::Mod(terms[0], terms[1], f.mod_kind());
  }
  return Formula::Pred(f.name(), std::move(terms), f.tense(), f.intensional(),
                       f.occurrence());
}

void CollectTermVars(const Term &t, std::vector<std::string> *out,
                     const std::vector<std::string> &bound) {
  if (t.kind == Term::Kind::kVariable) {
    for (const auto &b : bound) {
      if (b == t.name) return;
    }
    for (const auto &o : *out) {
      if (o == t.name) return;
    }
    out->push_back(t.name);
  }
  for (const Term &a : t.args) CollectTermVars(a, out, bound);
}

void FreeVarsRec(const Formula &f, std::vector<std::string> *bound,
                 std::vector<std::string> *out) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::kPred:
    case Kind::kMod:
      for (const Term &t : f.terms()) CollectTermVars(t, out, *bound);
      return;
    case Kind::kForAll:
    case Kind::kExists:
      bound->push_back(f.var());
      FreeVarsRec(f.child(0), bound, out);
      bound->pop_back();
      return;
    case Kind::kHigher:
      for (const auto &a : f.higher_args()) {
        if (std::holds_alternative<Term>(a)) {
          CollectTermVars(std::get<Term>(a), out, *bound);
        } else {
          FreeVarsRec(std::get<Formula>(a), bound, out);
        }
      }
      return;
    default:
      for (const Formula &c : f.children()) FreeVarsRec(c, bound, out);
  }
}

void CollectTermVarSet(const Term &t, std::set<std::string> *out) {
  if (t.kind == Term::Kind::kVariable) out->insert(t.name);
  for (const Term &a : t.args) CollectTermVarSet(a, out);
}

struct Renaming {
  std::map<std::string, std::string> names;
  int next = 1;

  std::string Fresh() { return "x" + std::to_string(next++); }
};

Term RenameTerm(const Term &t, Renaming *r) {
  if (t.kind == Term::Kind::kVariable) {
    auto it = r->names.find(t.name);
    if (it == r->names.end()) it = r->names.emplace(t.name, r->Fresh()).first;
    return Term::Variable(it->second);
  }
  if (t.kind == Term::Kind::kFunction) {
    Term out = t;
    for (Term &a : out.args) a = RenameTerm(a, r);
    return out;
  }
  return t;
}

// Renames in render order: binders are visited before their bodies.
Formula CanonRec(const Formula &f, Renaming *r) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::kPred:
    case Kind::kMod: {
      std::vector<Term> terms;
      for (const Term &t : f.terms()) terms.push_back(RenameTerm(t, r));
      return WithTerms(f, std::move(terms));
    }
    case Kind::kForAll:
    case Kind::kExists: {
      auto it = r->names.find(f.var());
      std::optional<std::string> saved;
      if (it != r->names.end()) saved = it->second;
      std::string fresh = r->Fresh();
      r->names[f.var()] = fresh;
      Formula body = CanonRec(f.child(0), r);
      if (saved) {
        r->names[f.var()] = *saved;
      } else {
        r->names.erase(f.var());
      }
      return f.kind() == Kind::kForAll ? Formula::ForAll(fresh, body)
                                       : Formula::Exists(fresh, body);
    }
    case Kind::kHigher: {
      std::vector<HigherArg> args;
      for (const auto &a : f.higher_args()) {
        if (std::holds_alternative<Term>(a)) {
          args.push_back(RenameTerm(std::get<Term>(a), r));
        } else {
          args.push_back(CanonRec(std::get<Formula>(a), r));
        }
      }
      return Formula::Higher(f.name(), std::move(args));
    }
    default: {
      std::vector<Formula> children;
      for (const Formula &c : f.children()) children.push_back(CanonRec(c, r));
      return Rebuild(f, std::move(children));
    }
  }
}

}  // namespace

Formula MapAtoms(const Formula &f,
                 const std::function<Formula(const Formula &)> &fn) {
  using Kind = Formula::Kind;
  if (f.is_atomic()) return fn(f);
  if (f.kind() == Kind::kHigher) {
    std::vector<HigherArg> args;
    for (const auto &a : f.higher_args()) {
      if (std::holds_alternative<Term>(a)) {
        args.push_back(a);
      } else {
        args.push_back(MapAtoms(std::get<Formula>(a), fn));
      }
    }
    return Formula::Higher(f.name(), std::move(args));
  }
  std::vector<Formula> children;
  for (const Formula &c : f.children()) children.push_back(MapAtoms(c, fn));
  return Rebuild(f, std::move(children));
}

Formula Substitute(const Formula &f, const std::string &var,
                   const Term &replacement) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::kPred:
    case Kind::kMod: {
      std::vector<Term> terms;
      for (const Term &t : f.terms()) {
        terms.push_back(SubstituteTerm(t, var, replacement));
      }
      return WithTerms(f, std::move(terms));
    }
    case Kind::kForAll:
    case Kind::kExists:
      if (f.var() == var) return f;
      return Rebuild(f, {Substitute(f.child(0), var, replacement)});
    case Kind::kHigher: {
      std::vector<HigherArg> args;
      for (const auto &a : f.higher_args()) {
        if (std::holds_alternative<Term>(a)) {
          args.push_back(SubstituteTerm(std::get<Term>(a), var, replacement));
        } else {
          args.push_back(Substitute(std::get<Formula>(a), var, replacement));
        }
      }
      return Formula::Higher(f.name(), std::move(args));
    }
    default: {
      std::vector<Formula> children;
      for (const Formula &c : f.children()) {
        children.push_back(Substitute(c, var, replacement));
      }
      return Rebuild(f, std::move(children));
    }
  }
}

std::vector<std::string> FreeVariables(const Formula &f) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  FreeVarsRec(f, &bound, &out);
  return out;
}

void CollectVariables(const Formula &f, std::set<std::string> *out) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::kPred:
    case Kind::kMod:
      for (const Term &t : f.terms()) CollectTermVarSet(t, out);
      return;
    case Kind::kForAll:
    case Kind::kExists:
      out->insert(f.var());
      CollectVariables(f.child(0), out);
      return;
    case Kind::kHigher:
      for (const auto &a : f.higher_args()) {
        if (std::holds_alternative<Term>(a)) {
          CollectTermVarSet(std::get<Term>(a), out);
        } else {
          CollectVariables(std::get<Formula>(a), out);
        }
      }
      return;
    default:
      for (const Formula &c : f.children()) CollectVariables(c, out);
  }
}

Formula CanonicalizeVariables(const Formula &f) {
  Renaming r;
  return CanonRec(f, &r);
}

Formula StripAnnotations(const Formula &f) {
  return MapAtoms(f, [](const Formula &a) {
    if (a.kind() != Formula::Kind::kPred || !a.occurrence()) return a;
    return Formula::Pred(a.name(), a.terms(), a.tense(), a.intensional());
  });
}

bool ContainsHigher(const Formula &f) {
  if (f.kind() == Formula::Kind::kHigher) return true;
  for (const Formula &c : f.children()) {
    if (ContainsHigher(c)) return true;
  }
  return false;
}

bool ContainsModal(const Formula &f) {
  if (f.kind() == Formula::Kind::kBox || f.kind() == Formula::Kind::kDiamond) {
    return true;
  }
  if (f.kind() == Formula::Kind::kHigher) {
    for (const auto &a : f.higher_args()) {
      if (std::holds_alternative<Formula>(a) &&
          ContainsModal(std::get<Formula>(a))) {
        return true;
      }
    }
  }
  for (const Formula &c : f.children()) {
    if (ContainsModal(c)) return true;
  }
  return false;
}

}  // namespace claims
