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

#include "claims/lowering.h"

#include <algorithm>
#include <map>
#include <set>

namespace claims {

const char *LoweringError::code() const {
  switch (kind_) {
    case Kind::kHigherOrderInput: return "HIGHER_ORDER_INPUT";
    case Kind::kNestedExistential: return "NESTED_EXISTENTIAL";
    case Kind::kUnsupported: return "UNSUPPORTED_CONSTRUCTION";
  }
  return "LOWERING_ERROR";
}

namespace {

using K = Formula::Kind;

Formula NegNnf(const Formula &f);

Formula Nnf(const Formula &f) {
  switch (f.kind()) {
    case K::kPred:
    case K::kMod:
    case K::kHigher:
      return f;
    case K::kNot:
      return NegNnf(f.child(0));
    case K::kAnd:
      return Formula::And(Nnf(f.child(0)), Nnf(f.child(1)));
    case K::kOr:
      return Formula::Or(Nnf(f.child(0)), Nnf(f.child(1)));
    case K::kImplies:
      return Formula::Or(NegNnf(f.child(0)), Nnf(f.child(1)));
    case K::kForAll:
      return Formula::ForAll(f.var(), Nnf(f.child(0)));
    case K::kExists:
      return Formula::Exists(f.var(), Nnf(f.child(0)));
    case K::kBox:
      return Formula::Box(Nnf(f.child(0)));
    case K::kDiamond:
      return Formula::Diamond(Nnf(f.child(0)));
  }
  return f;
}

Formula NegNnf(const Formula &f) {
  switch (f.kind()) {
    case K::kPred:
    case K::kMod:
    case K::kHigher:
      return Formula::Not(f);
    case K::kNot:
      return Nnf(f.child(0));
    case K::kAnd:
      return Formula::Or(NegNnf(f.child(0)), NegNnf(f.child(1)));
    case K::kOr:
      return Formula::And(NegNnf(f.child(0)), NegNnf(f.child(1)));
    case K::kImplies:
      return Formula::And(Nnf(f.child(0)), NegNnf(f.child(1)));
    case K::kForAll:
      return Formula::Exists(f.var(), NegNnf(f.child(0)));
    case K::kExists:
      return Formula::ForAll(f.var(), NegNnf(f.child(0)));
    case K::kBox:
      return Formula::Diamond(NegNnf(f.child(0)));
    case K::kDiamond:
      return Formula::Box(NegNnf(f.child(0)));
  }
  return f;
}

bool HasQuantifier(const Formula &f) {
  switch (f.kind()) {
    case K::kForAll:
    case K::kExists:
      return true;
    case K::kPred:
    case K::kMod:
      return false;
    case K::kHigher:
      for (const HigherArg &a : f.higher_args()) {
        if (const Formula *g = std::get_if<Formula>(&a)) {
          if (HasQuantifier(*g)) return true;
        }
      }
      return false;
    default:
      for (const Formula &c : f.children()) {
        if (HasQuantifier(c)) return true;
      }
      return false;
  }
}

class Skolemizer {
 public:
  Skolemizer(SkolemMode mode, SkolemCounter *counter) : mode_(mode), counter_(counter) {}

  Formula Run(const Formula &f) {
    switch (f.kind()) {
      case K::kPred:
      case K::kMod:
      case K::kNot:
        return f;
      case K::kHigher:
        throw LoweringError(LoweringError::Kind::kHigherOrderInput,
                            "higher-order predicate " + f.name() +
                                " has no first-order lowering");
      case K::kAnd:
        return Formula::And(Run(f.child(0)), Run(f.child(1)));
      case K::kOr:
        return Formula::Or(Run(f.child(0)), Run(f.child(1)));
      case K::kForAll: {
        universals_.push_back(f.var());
        Formula body = Run(f.child(0));
        universals_.pop_back();
        return Formula::ForAll(f.var(), body);
      }
      case K::kExists: {
        std::vector<std::string> free = FreeVariables(f);
        std::vector<Term> deps;
        for (const std::string &u : universals_) {
          if (std::find(free.begin(), free.end(), u) != free.end() &&
              std::find_if(deps.begin(), deps.end(), [&](const Term &t) {
                return t.name == u;
              }) == deps.end()) {
            deps.push_back(Term::Variable(u));
          }
        }
        Term witness;
        if (deps.empty()) {
          witness = Term::Skolem(counter_->next_constant++);
        } else if (mode_ == SkolemMode::kFunctions) {
          witness = Term::Function("skf" + std::to_string(counter_->next_function++),
                                   deps);
        } else {
          throw LoweringError(LoweringError::Kind::kNestedExistential,
                              "existential " + f.var() + " depends on universal " +
                                  deps.front().name);
        }
        return Run(Substitute(f.child(0), f.var(), witness));
      }
      case K::kImplies:
      case K::kBox:
      case K::kDiamond:
        break;
    }
    throw LoweringError(LoweringError::Kind::kUnsupported,
                        "modal operator reached Skolemization");
  }

 private:
  SkolemMode mode_;
  SkolemCounter *counter_;
  std::vector<std::string> universals_;
};

Literal AtomToLiteral(const Formula &atom, bool positive) {
  Literal l;
  l.positive = positive;
  l.predicate = AtomPredicateName(atom);
  l.args = atom.terms();
  return l;
}

using Cnf = std::vector<std::vector<Literal>>;

class Clausifier {
 public:
  Cnf Run(const Formula &f) {
    switch (f.kind()) {
      case K::kPred:
      case K::kMod:
        return {{AtomToLiteral(f, true)}};
      case K::kNot: {
        const Formula &g = f.child(0);
        if (!g.is_atomic()) break;
        return {{AtomToLiteral(g, false)}};
      }
      case K::kAnd: {
        Cnf a = Run(f.child(0));
        Cnf b = Run(f.child(1));
        a.insert(a.end(), b.begin(), b.end());
        return a;
      }
      case K::kOr: {
        Cnf a = Run(f.child(0));
        Cnf b = Run(f.child(1));
        Cnf out;
        for (const auto &ca : a) {
          for (const auto &cb : b) {
            std::vector<Literal> merged = ca;
            merged.insert(merged.end(), cb.begin(), cb.end());
            out.push_back(std::move(merged));
          }
        }
        return out;
      }
      case K::kForAll: {
        std::string fresh = "$" + std::to_string(++fresh_);
        return Run(Substitute(f.child(0), f.var(), Term::Variable(fresh)));
      }
      case K::kExists:
        throw LoweringError(LoweringError::Kind::kUnsupported,
                            "clausify requires Skolemized input");
      case K::kHigher:
        throw LoweringError(LoweringError::Kind::kHigherOrderInput,
                            "higher-order predicate " + f.name());
      default:
        break;
    }
    throw LoweringError(LoweringError::Kind::kUnsupported,
                        "clausify reached " + Render(f));
  }

 private:
  int fresh_ = 0;
};

Term RenameVars(const Term &t, std::map<std::string, std::string> *names) {
  if (t.is_variable()) {
    auto it = names->find(t.name);
    if (it == names->end()) {
      it = names->emplace(t.name, "x" + std::to_string(names->size() + 1)).first;
    }
    return Term::Variable(it->second);
  }
  if (t.kind == Term::Kind::kFunction) {
    std::vector<Term> args;
    for (const Term &a : t.args) args.push_back(RenameVars(a, names));
    return Term::Function(t.name, std::move(args));
  }
  return t;
}

Clause NormalizeClause(std::vector<Literal> literals) {
  Clause c;
  c.literals = std::move(literals);
  c.Dedupe();
  std::map<std::string, std::string> names;
  for (Literal &l : c.literals) {
    for (Term &t : l.args) t = RenameVars(t, &names);
  }
  return c;
}

int MaxVariableIndex(const Formula &f) {
  std::set<std::string> vars;
  CollectVariables(f, &vars);
  int best = 0;
  for (const std::string &v : vars) {
    if (v.size() > 1 && v[0] == 'x') {
      try {
        best = std::max(best, std::stoi(v.substr(1)));
      } catch (...) {
      }
    }
  }
  return best;
}

class StandardTranslator {
 public:
  explicit StandardTranslator(int next) : next_(next) {}

  Formula Run(const Formula &f, const Term &w) {
    switch (f.kind()) {
      case K::kPred: {
        std::vector<Term> args = f.terms();
        args.push_back(w);
        return Formula::Pred(f.name(), std::move(args), f.tense(), f.intensional(),
                             f.occurrence());
      }
      case K::kMod: {
        std::vector<Term> args = f.terms();
        args.push_back(w);
        return Formula::Pred(AtomPredicateName(f), std::move(args));
      }
      case K::kHigher:
        throw LoweringError(LoweringError::Kind::kHigherOrderInput,
                            "higher-order predicate " + f.name());
      case K::kNot:
        return Formula::Not(Run(f.child(0), w));
      case K::kAnd:
        return Formula::And(Run(f.child(0), w), Run(f.child(1), w));
      case K::kOr:
        return Formula::Or(Run(f.child(0), w), Run(f.child(1), w));
      case K::kImplies:
        return Formula::Implies(Run(f.child(0), w), Run(f.child(1), w));
      case K::kForAll:
        return Formula::ForAll(f.var(), Run(f.child(0), w));
      case K::kExists:
        return Formula::Exists(f.var(), Run(f.child(0), w));
      case K::kBox: {
        Term v = Term::Var(next_++);
        Formula acc = Formula::Pred(kAccessibility, {w, v});
        return Formula::ForAll(v.name, Formula::Implies(acc, Run(f.child(0), v)));
      }
      case K::kDiamond: {
        Term v = Term::Var(next_++);
        Formula acc = Formula::Pred(kAccessibility, {w, v});
        return Formula::Exists(v.name, Formula::And(acc, Run(f.child(0), v)));
      }
    }
    return f;
  }

 private:
  int next_;
};

int TenseRank(Tense t) {
  switch (t) {
    case Tense::kPast: return 0;
    case Tense::kPresent: return 1;
    case Tense::kFuture: return 2;
    case Tense::kNone: return 1;
  }
  return 1;
}

// Event constant index for each finite occurrence id, numbered by id order.
std::map<int, int> EventNumbers(const DiscourseContext &ctx) {
  std::vector<int> ids;
  for (const VerbOccurrence &v : ctx.verbs) {
    if (v.finite) ids.push_back(v.id);
  }
  std::sort(ids.begin(), ids.end());
  std::map<int, int> out;
  for (size_t i = 0; i < ids.size(); ++i) out[ids[i]] = static_cast<int>(i) + 1;
  return out;
}

void CollectEvents(const std::vector<Clause> &clauses, std::set<int> *out) {
  for (const Clause &c : clauses) {
    for (const Literal &l : c.literals) {
      for (const Term &t : l.args) {
        if (t.kind == Term::Kind::kEvent) out->insert(t.id);
      }
    }
  }
}

}  // namespace

Formula ToNnf(const Formula &f) { return Nnf(f); }

Formula Skolemize(const Formula &f, SkolemMode mode, SkolemCounter *counter) {
  if (ContainsHigher(f)) {
    throw LoweringError(LoweringError::Kind::kHigherOrderInput,
                        "higher-order input has no first-order lowering");
  }
  if (!HasQuantifier(f)) return f;
  SkolemCounter local;
  Skolemizer s(mode, counter != nullptr ? counter : &local);
  return s.Run(Nnf(f));
}

Formula StandardTranslation(const Formula &f) {
  StandardTranslator st(MaxVariableIndex(f) + 1);
  return st.Run(f, Term::Constant(kActualWorld));
}

std::vector<Clause> Clausify(const Formula &f) {
  Clausifier c;
  Cnf cnf = c.Run(Nnf(f));
  std::vector<Clause> out;
  for (auto &lits : cnf) {
    Clause clause = NormalizeClause(std::move(lits));
    if (clause.IsTautology()) continue;
    if (std::find(out.begin(), out.end(), clause) != out.end()) continue;
    out.push_back(std::move(clause));
  }
  return out;
}

std::vector<Clause> ClausifyWithFunctions(const Formula &f, SkolemCounter *counter) {
  return Clausify(Skolemize(f, SkolemMode::kFunctions, counter));
}

std::string AtomPredicateName(const Formula &atom) {
  if (atom.kind() == K::kMod) {
    return atom.mod_kind() == ModKind::kPossessive ? "mod" : "amod";
  }
  if (atom.kind() != K::kPred) {
    throw LoweringError(LoweringError::Kind::kHigherOrderInput,
                        "not a first-order atom: " + Render(atom));
  }
  std::string name = atom.name();
  if (atom.tense() == GammaTense::kPast) name += "_p";
  if (atom.tense() == GammaTense::kFuture) name += "_f";
  if (atom.intensional()) name += "_i";
  return name;
}

Formula GoalFromClauses(const std::vector<Clause> &clauses) {
  if (clauses.empty()) throw std::invalid_argument("goal needs at least one clause");
  std::map<Term, Term> constants;
  std::vector<std::string> existential_order;
  int next = 1;
  auto constant_var = [&](const Term &t) -> Term {
    auto it = constants.find(t);
    if (it != constants.end()) return it->second;
    Term v = Term::Var(next++);
    constants.emplace(t, v);
    existential_order.push_back(v.name);
    return v;
  };
  // First pass fixes the existential variable numbering.
  for (const Clause &c : clauses) {
    for (const Literal &l : c.literals) {
      for (const Term &t : l.args) {
        if (t.kind == Term::Kind::kSkolem || t.kind == Term::Kind::kEvent) {
          constant_var(t);
        }
      }
    }
  }
  std::vector<Formula> parts;
  for (const Clause &c : clauses) {
    if (c.empty()) throw std::invalid_argument("goal contains the empty clause");
    std::map<std::string, Term> vars;
    std::vector<std::string> var_order;
    std::function<Term(const Term &)> map_term = [&](const Term &t) -> Term {
      if (t.is_variable()) {
        auto it = vars.find(t.name);
        if (it != vars.end()) return it->second;
        Term v = Term::Var(next++);
        vars.emplace(t.name, v);
        var_order.push_back(v.name);
        return v;
      }
      if (t.kind == Term::Kind::kSkolem || t.kind == Term::Kind::kEvent) {
        return constant_var(t);
      }
      if (t.kind == Term::Kind::kFunction) {
        std::vector<Term> args;
        for (const Term &a : t.args) args.push_back(map_term(a));
        return Term::Function(t.name, std::move(args));
      }
      return t;
    };
    std::optional<Formula> disj;
    for (const Literal &l : c.literals) {
      std::vector<Term> args;
      for (const Term &t : l.args) args.push_back(map_term(t));
      Formula atom = Formula::Pred(l.predicate, std::move(args));
      Formula lit = l.positive ? atom : Formula::Not(atom);
      disj = disj ? Formula::Or(*disj, lit) : lit;
    }
    Formula clause_f = *disj;
    for (auto it = var_order.rbegin(); it != var_order.rend(); ++it) {
      clause_f = Formula::ForAll(*it, clause_f);
    }
    parts.push_back(clause_f);
  }
  Formula goal = Formula::Conjoin(parts);
  for (auto it = existential_order.rbegin(); it != existential_order.rend(); ++it) {
    goal = Formula::Exists(*it, goal);
  }
  return goal;
}

std::vector<TemporalFact> ReifyTense(const DiscourseContext &ctx) {
  std::map<int, int> events = EventNumbers(ctx);
  std::vector<const VerbOccurrence *> finite;
  for (const VerbOccurrence &v : ctx.verbs) {
    if (v.finite) finite.push_back(&v);
  }
  std::sort(finite.begin(), finite.end(),
            [](const VerbOccurrence *a, const VerbOccurrence *b) { return a->id < b->id; });
  std::vector<TemporalFact> out;
  for (const VerbOccurrence *a : finite) {
    for (const VerbOccurrence *b : finite) {
      if (a == b) continue;
      int ra = TenseRank(a->tense);
      int rb = TenseRank(b->tense);
      bool before = ra < rb || (ra == rb && a->tense == Tense::kPast &&
                                a->sentence < b->sentence);
      if (before) {
        out.push_back({Term::Event(events[a->id]), Term::Event(events[b->id])});
      }
    }
  }
  return out;
}

Formula GroundReading(const Formula &reading, const DiscourseContext &ctx,
                      int *next_skolem) {
  std::map<int, int> events = EventNumbers(ctx);
  Formula g = MapAtoms(reading, [&](const Formula &atom) -> Formula {
    if (atom.kind() != K::kPred || !atom.occurrence()) return atom;
    const VerbOccurrence *v = ctx.FindVerb(*atom.occurrence());
    if (v == nullptr) return atom;
    std::string name = atom.name() + (atom.intensional() ? "_i" : "");
    std::vector<Term> terms = atom.terms();
    if (v->finite) terms.push_back(Term::Event(events[v->id]));
    std::vector<Formula> parts = {Formula::Pred(name, std::move(terms))};
    if (!v->negated) {
      if (v->presence_inducing && !atom.terms().empty()) {
        parts.push_back(Formula::Pred("present", {atom.terms()[0]}));
      }
      if (v->intensional_capable && !atom.intensional() && atom.terms().size() >= 2) {
        parts.push_back(Formula::Pred("present", {atom.terms()[1]}));
      }
    }
    return Formula::Conjoin(parts);
  });

  std::vector<std::string> free = FreeVariables(g);
  std::vector<std::string> order;
  for (const Referent &r : ctx.referents) {
    if (std::find(free.begin(), free.end(), r.term.name) != free.end()) {
      order.push_back(r.term.name);
    }
  }
  for (const std::string &v : free) {
    if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
  }
  int next = 1;
  for (const std::string &v : order) g = Substitute(g, v, Term::Skolem(next++));
  if (next_skolem != nullptr) *next_skolem = next;
  return g;
}

DeltaSet Lower(const Formula &reading, const DiscourseContext &ctx) {
  if (ContainsHigher(reading)) {
    throw LoweringError(LoweringError::Kind::kHigherOrderInput,
                        "reading contains a higher-order predicate");
  }
  int next = 1;
  Formula g = GroundReading(reading, ctx, &next);
  SkolemCounter counter{next, 1};
  DeltaSet d;
  std::set<int> used;
  if (ContainsModal(g)) {
    d.modal = Clausify(
        Skolemize(StandardTranslation(g), SkolemMode::kConstantsOnly, &counter));
    CollectEvents(d.modal, &used);
  } else {
    d.fol = Clausify(Skolemize(g, SkolemMode::kConstantsOnly, &counter));
    CollectEvents(d.fol, &used);
  }
  for (const TemporalFact &t : ReifyTense(ctx)) {
    if (used.count(t.earlier.id) && used.count(t.later.id)) d.temporal.push_back(t);
  }
  return d;
}

std::vector<DeltaSet> Lower(const std::vector<Formula> &readings,
                            const DiscourseContext &ctx) {
  std::vector<DeltaSet> out;
  for (const Formula &r : readings) out.push_back(Lower(r, ctx));
  return out;
}

}  // namespace claims
