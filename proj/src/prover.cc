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

#include "claims/prover.h"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "claims/lowering.h"

namespace claims {

void Budget::Validate() const {
  if (max_duration.count() <= 0) throw std::invalid_argument("budget duration must be positive");
  if (max_clauses == 0) throw std::invalid_argument("budget clause limit must be positive");
}

const char *VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kProved: return "PROVED";
    case Verdict::kRefuted: return "REFUTED";
    case Verdict::kTimeout: return "TIMEOUT";
  }
  return "?";
}

const char *EquivalenceName(Equivalence e) {
  switch (e) {
    case Equivalence::kEquivalent: return "EQUIVALENT";
    case Equivalence::kPStrictlyStronger: return "P_STRICTLY_STRONGER";
    case Equivalence::kQStrictlyStronger: return "Q_STRICTLY_STRONGER";
    case Equivalence::kIncomparable: return "INCOMPARABLE";
    case Equivalence::kTimeout: return "TIMEOUT";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kUnbound = INT_MIN;

inline bool IsVar(int t) { return t < 0; }
inline int VarOf(int t) { return -t - 1; }
inline int MakeVar(int v) { return -v - 1; }

struct VecHash {
  size_t operator()(const std::vector<int> &v) const {
    uint64_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<uint64_t>(static_cast<uint32_t>(x));
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

// Hash-consed term store. Identical terms share an id, so equality is an
// integer comparison.
class TermBank {
 public:
  int Intern(int sym, const std::vector<int> &args) {
    std::vector<int> key;
    key.reserve(args.size() + 1);
    key.push_back(sym);
    key.insert(key.end(), args.begin(), args.end());
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    bool ground = true;
    int weight = 1;
    for (int a : args) {
      if (IsVar(a)) {
        ground = false;
        weight += 1;
      } else {
        ground = ground && nodes_[a].ground;
        weight += nodes_[a].weight;
      }
    }
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({sym, args, ground, weight});
    index_.emplace(std::move(key), id);
    return id;
  }

  int sym(int t) const { return nodes_[t].sym; }
  const std::vector<int> &args(int t) const { return nodes_[t].args; }
  bool ground(int t) const { return IsVar(t) ? false : nodes_[t].ground; }
  int weight(int t) const { return IsVar(t) ? 1 : nodes_[t].weight; }

 private:
  struct Node {
    int sym;
    std::vector<int> args;
    bool ground;
    int weight;
  };
  std::vector<Node> nodes_;
  std::unordered_map<std::vector<int>, int, VecHash> index_;
};

struct PLit {
  bool pos = true;
  int pred = 0;
  std::vector<int> args;

  bool operator==(const PLit &o) const {
    return pos == o.pos && pred == o.pred && args == o.args;
  }
};

struct PClause {
  std::vector<PLit> lits;
  int num_vars = 0;
  int weight = 0;
  ProofStep::Rule rule = ProofStep::Rule::kInput;
  int a = -1;
  int b = -1;
  bool positive = true;
  bool removed = false;
  uint64_t mask = 0;
};

class Search {
 public:
  explicit Search(const Budget &budget) : budget_(budget), start_(Clock::now()) {}

  ProofResult Run(const std::vector<Clause> &input) {
    ProofResult result;
    for (const Clause &c : input) {
      PClause pc = Import(c);
      if (IsTautology(pc)) continue;
      int idx = Retain(std::move(pc));
      if (idx >= 0 && clauses_[idx].lits.empty()) return Finish(Verdict::kProved, idx);
    }
    while (!passive_.empty()) {
      if (OutOfBudget()) return Finish(Verdict::kTimeout, -1);
      int given = passive_.top().index;
      passive_.pop();
      PClause &g = clauses_[given];
      if (g.removed) continue;
      if (ForwardSubsumed(given)) {
        clauses_[given].removed = true;
        continue;
      }
      BackwardSubsume(given);
      active_.push_back(given);
      Index(given);
      int empty = Generate(given);
      if (empty >= 0) return Finish(Verdict::kProved, empty);
      if (timed_out_) return Finish(Verdict::kTimeout, -1);
    }
    return Finish(Verdict::kRefuted, -1);
  }

 private:
  struct Queued {
    size_t lits;
    int weight;
    int index;
    bool operator>(const Queued &o) const {
      return std::tie(lits, weight, index) > std::tie(o.lits, o.weight, o.index);
    }
  };

  // Symbols -----------------------------------------------------------------

  int PredSym(const std::string &name) {
    auto it = pred_ids_.find(name);
    if (it != pred_ids_.end()) return it->second;
    int id = static_cast<int>(pred_names_.size());
    pred_names_.push_back(name);
    pred_ids_.emplace(name, id);
    return id;
  }

  int FunSym(const Term &proto, size_t arity) {
    std::string key = (arity == 0 ? proto.ToString() : proto.name) + "/" +
                      std::to_string(arity);
    auto it = fun_ids_.find(key);
    if (it != fun_ids_.end()) return it->second;
    int id = static_cast<int>(fun_protos_.size());
    Term p = proto;
    p.args.clear();
    fun_protos_.push_back(p);
    fun_ids_.emplace(key, id);
    return id;
  }

  int ImportTerm(const Term &t, std::map<std::string, int> *vars) {
    if (t.is_variable()) {
      auto it = vars->find(t.name);
      if (it == vars->end()) it = vars->emplace(t.name, static_cast<int>(vars->size())).first;
      return MakeVar(it->second);
    }
    std::vector<int> args;
    for (const Term &a : t.args) args.push_back(ImportTerm(a, vars));
    return bank_.Intern(FunSym(t, t.args.size()), args);
  }

  PClause Import(const Clause &c) {
    PClause pc;
    std::map<std::string, int> vars;
    for (const Literal &l : c.literals) {
      PLit pl;
      pl.pos = l.positive;
      pl.pred = PredSym(l.predicate + "/" + std::to_string(l.args.size()));
      for (const Term &t : l.args) pl.args.push_back(ImportTerm(t, &vars));
      if (std::find(pc.lits.begin(), pc.lits.end(), pl) == pc.lits.end()) {
        pc.lits.push_back(std::move(pl));
      }
    }
    pc.num_vars = static_cast<int>(vars.size());
    pc.rule = ProofStep::Rule::kInput;
    return pc;
  }

  Term ExportTerm(int t) const {
    if (IsVar(t)) return Term::Var(VarOf(t) + 1);
    const Term &proto = fun_protos_[bank_.sym(t)];
    const std::vector<int> &args = bank_.args(t);
    if (args.empty()) return proto;
    std::vector<Term> out;
    for (int a : args) out.push_back(ExportTerm(a));
    return Term::Function(proto.name, std::move(out));
  }

  Clause Export(const PClause &pc) const {
    Clause c;
    for (const PLit &l : pc.lits) {
      Literal lit;
      lit.positive = l.pos;
      const std::string &full = pred_names_[l.pred];
      lit.predicate = full.substr(0, full.rfind('/'));
      for (int t : l.args) lit.args.push_back(ExportTerm(t));
      c.literals.push_back(std::move(lit));
    }
    return c;
  }

  // Bookkeeping ---------------------------------------------------------------

  static bool IsTautology(const PClause &c) {
    for (size_t i = 0; i < c.lits.size(); ++i) {
      for (size_t j = i + 1; j < c.lits.size(); ++j) {
        const PLit &a = c.lits[i];
        const PLit &b = c.lits[j];
        if (a.pos != b.pos && a.pred == b.pred && a.args == b.args) return true;
      }
    }
    return false;
  }

  void Finalize(PClause *c) {
    c->weight = 0;
    c->positive = true;
    c->mask = 0;
    for (const PLit &l : c->lits) {
      c->weight += 1;
      for (int t : l.args) c->weight += bank_.weight(t);
      if (!l.pos) c->positive = false;
      c->mask |= uint64_t{1} << ((l.pred * 2 + (l.pos ? 1 : 0)) % 64);
    }
  }

  std::vector<int> Key(const PClause &c) const {
    std::vector<int> key;
    for (const PLit &l : c.lits) {
      key.push_back(l.pos ? -1 : -2);
      key.push_back(l.pred);
      key.insert(key.end(), l.args.begin(), l.args.end());
    }
    return key;
  }

  // Adds a clause to the passive queue. Returns its index or -1 when it is
  // an exact duplicate of a retained clause.
  int Retain(PClause c) {
    Finalize(&c);
    std::vector<int> key = Key(c);
    if (!seen_.insert(key).second) return -1;
    int idx = static_cast<int>(clauses_.size());
    passive_.push({c.lits.size(), c.weight, idx});
    clauses_.push_back(std::move(c));
    ++generated_;
    return idx;
  }

  void Index(int idx) {
    const PClause &c = clauses_[idx];
    for (const PLit &l : c.lits) {
      auto &bucket = by_pred_[l.pred * 2 + (l.pos ? 1 : 0)];
      if (bucket.empty() || bucket.back() != idx) bucket.push_back(idx);
    }
  }

  bool OutOfBudget() {
    if (timed_out_) return true;
    if (generated_ > budget_.max_clauses || Clock::now() - start_ > budget_.max_duration ||
        budget_.stop.stop_requested()) {
      timed_out_ = true;
    }
    return timed_out_;
  }

  // Unification over (term, offset) pairs ------------------------------------

  void Deref(int *t, int *o) const {
    while (IsVar(*t)) {
      const auto &b = bind_[VarOf(*t) + *o];
      if (b.first == kUnbound) return;
      *t = b.first;
      *o = b.second;
    }
  }

  void Bind(int var, int t, int o) {
    bind_[var] = {t, o};
    trail_.push_back(var);
  }

  void Undo(size_t mark) {
    while (trail_.size() > mark) {
      bind_[trail_.back()] = {kUnbound, 0};
      trail_.pop_back();
    }
  }

  bool Occurs(int var, int t, int o) const {
    Deref(&t, &o);
    if (IsVar(t)) return VarOf(t) + o == var;
    if (bank_.ground(t)) return false;
    for (int a : bank_.args(t)) {
      if (Occurs(var, a, o)) return true;
    }
    return false;
  }

  bool Unify(int t1, int o1, int t2, int o2) {
    Deref(&t1, &o1);
    Deref(&t2, &o2);
    if (IsVar(t1) && IsVar(t2)) {
      int v1 = VarOf(t1) + o1;
      int v2 = VarOf(t2) + o2;
      if (v1 != v2) Bind(v1, t2, o2);
      return true;
    }
    if (IsVar(t1)) {
      if (Occurs(VarOf(t1) + o1, t2, o2)) return false;
      Bind(VarOf(t1) + o1, t2, o2);
      return true;
    }
    if (IsVar(t2)) {
      if (Occurs(VarOf(t2) + o2, t1, o1)) return false;
      Bind(VarOf(t2) + o2, t1, o1);
      return true;
    }
    if (t1 == t2 && bank_.ground(t1)) return true;
    if (bank_.sym(t1) != bank_.sym(t2)) return false;
    const std::vector<int> &a1 = bank_.args(t1);
    const std::vector<int> &a2 = bank_.args(t2);
    if (a1.size() != a2.size()) return false;
    for (size_t i = 0; i < a1.size(); ++i) {
      if (!Unify(a1[i], o1, a2[i], o2)) return false;
    }
    return true;
  }

  bool UnifyArgs(const PLit &a, int oa, const PLit &b, int ob) {
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (!Unify(a.args[i], oa, b.args[i], ob)) return false;
    }
    return true;
  }

  int Build(int t, int o, std::unordered_map<int, int> *rename) {
    Deref(&t, &o);
    if (IsVar(t)) {
      int g = VarOf(t) + o;
      auto it = rename->find(g);
      if (it == rename->end()) {
        it = rename->emplace(g, static_cast<int>(rename->size())).first;
      }
      return MakeVar(it->second);
    }
    if (bank_.ground(t)) return t;
    std::vector<int> args;
    for (int a : bank_.args(t)) args.push_back(Build(a, o, rename));
    return bank_.Intern(bank_.sym(t), args);
  }

  void AppendBuilt(const PLit &l, int o, std::unordered_map<int, int> *rename,
                   std::vector<PLit> *out) {
    PLit nl;
    nl.pos = l.pos;
    nl.pred = l.pred;
    for (int t : l.args) nl.args.push_back(Build(t, o, rename));
    if (std::find(out->begin(), out->end(), nl) == out->end()) out->push_back(std::move(nl));
  }

  void EnsureBindings(size_t n) {
    if (bind_.size() < n) bind_.resize(n, {kUnbound, 0});
  }

  // Subsumption ---------------------------------------------------------------

  bool Match(int tc, int td, std::vector<int> *theta, std::vector<int> *trail) {
    if (IsVar(tc)) {
      int v = VarOf(tc);
      if ((*theta)[v] == kUnbound) {
        (*theta)[v] = td;
        trail->push_back(v);
        return true;
      }
      return (*theta)[v] == td;
    }
    if (bank_.ground(tc)) return tc == td;
    if (IsVar(td) || bank_.sym(tc) != bank_.sym(td)) return false;
    const std::vector<int> &ac = bank_.args(tc);
    const std::vector<int> &ad = bank_.args(td);
    if (ac.size() != ad.size()) return false;
    for (size_t i = 0; i < ac.size(); ++i) {
      if (!Match(ac[i], ad[i], theta, trail)) return false;
    }
    return true;
  }

  bool SubsumeRec(const PClause &c, const PClause &d, size_t k, std::vector<int> *theta,
                  std::vector<int> *trail) {
    if (k == c.lits.size()) return true;
    const PLit &lc = c.lits[k];
    for (const PLit &ld : d.lits) {
      if (ld.pos != lc.pos || ld.pred != lc.pred) continue;
      size_t mark = trail->size();
      bool ok = true;
      for (size_t i = 0; i < lc.args.size() && ok; ++i) {
        ok = Match(lc.args[i], ld.args[i], theta, trail);
      }
      if (ok && SubsumeRec(c, d, k + 1, theta, trail)) return true;
      while (trail->size() > mark) {
        (*theta)[trail->back()] = kUnbound;
        trail->pop_back();
      }
    }
    return false;
  }

  bool Subsumes(const PClause &c, const PClause &d) {
    if (c.lits.size() > d.lits.size()) return false;
    if ((c.mask & ~d.mask) != 0) return false;
    std::vector<int> theta(c.num_vars, kUnbound);
    std::vector<int> trail;
    return SubsumeRec(c, d, 0, &theta, &trail);
  }

  bool ForwardSubsumed(int idx) {
    const PClause &d = clauses_[idx];
    for (int a : active_) {
      if (a == idx || clauses_[a].removed) continue;
      if (Subsumes(clauses_[a], d)) return true;
    }
    return false;
  }

  void BackwardSubsume(int idx) {
    const PClause &c = clauses_[idx];
    for (int a : active_) {
      if (clauses_[a].removed) continue;
      if (Subsumes(c, clauses_[a])) clauses_[a].removed = true;
    }
  }

  // Inference -----------------------------------------------------------------

  // Records a new clause; returns its index if it is the empty clause.
  int Emit(std::vector<PLit> lits, int num_vars, ProofStep::Rule rule, int a, int b) {
    PClause c;
    c.lits = std::move(lits);
    c.num_vars = num_vars;
    c.rule = rule;
    c.a = a;
    c.b = b;
    if (IsTautology(c)) return -1;
    Finalize(&c);
    for (int act : active_) {
      if (!clauses_[act].removed && Subsumes(clauses_[act], c)) return -1;
    }
    int idx = Retain(std::move(c));
    if (idx >= 0 && clauses_[idx].lits.empty()) return idx;
    return -1;
  }

  int Generate(int given) {
    // Factors of the given clause.
    {
      const PClause g = clauses_[given];
      EnsureBindings(g.num_vars);
      for (size_t i = 0; i < g.lits.size(); ++i) {
        for (size_t j = i + 1; j < g.lits.size(); ++j) {
          if (g.lits[i].pos != g.lits[j].pos || g.lits[i].pred != g.lits[j].pred) continue;
          size_t mark = trail_.size();
          if (UnifyArgs(g.lits[i], 0, g.lits[j], 0)) {
            std::unordered_map<int, int> rename;
            std::vector<PLit> lits;
            for (size_t k = 0; k < g.lits.size(); ++k) {
              if (k != j) AppendBuilt(g.lits[k], 0, &rename, &lits);
            }
            int nv = static_cast<int>(rename.size());
            Undo(mark);
            int e = Emit(std::move(lits), nv, ProofStep::Rule::kFactor, given, -1);
            if (e >= 0) return e;
          } else {
            Undo(mark);
          }
        }
      }
    }
    // Binary resolvents with every active clause, one parent positive.
    const PClause g = clauses_[given];
    for (size_t i = 0; i < g.lits.size(); ++i) {
      const PLit &gl = g.lits[i];
      int key = gl.pred * 2 + (gl.pos ? 0 : 1);
      auto it = by_pred_.find(key);
      if (it == by_pred_.end()) continue;
      std::vector<int> partners = it->second;
      for (int p : partners) {
        if (clauses_[p].removed && p != given) continue;
        const PClause partner = clauses_[p];
        if (!g.positive && !partner.positive) continue;
        EnsureBindings(g.num_vars + partner.num_vars);
        for (size_t j = 0; j < partner.lits.size(); ++j) {
          const PLit &pl = partner.lits[j];
          if (pl.pred != gl.pred || pl.pos == gl.pos) continue;
          size_t mark = trail_.size();
          if (UnifyArgs(gl, 0, pl, g.num_vars)) {
            std::unordered_map<int, int> rename;
            std::vector<PLit> lits;
            for (size_t k = 0; k < g.lits.size(); ++k) {
              if (k != i) AppendBuilt(g.lits[k], 0, &rename, &lits);
            }
            for (size_t k = 0; k < partner.lits.size(); ++k) {
              if (k != j) AppendBuilt(partner.lits[k], g.num_vars, &rename, &lits);
            }
            int nv = static_cast<int>(rename.size());
            Undo(mark);
            int e = Emit(std::move(lits), nv, ProofStep::Rule::kResolve, given, p);
            if (e >= 0) return e;
            if ((++attempts_ & 255) == 0 && OutOfBudget()) return -1;
          } else {
            Undo(mark);
          }
        }
      }
    }
    return -1;
  }

  ProofResult Finish(Verdict v, int empty) {
    ProofResult r;
    r.verdict = v;
    r.stats.clauses_generated = generated_;
    r.stats.elapsed =
        std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start_);
    if (v == Verdict::kProved) r.proof = ExtractProof(empty);
    return r;
  }

  std::vector<ProofStep> ExtractProof(int empty) const {
    std::vector<int> stack = {empty};
    std::vector<bool> used(clauses_.size(), false);
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      if (c < 0 || used[c]) continue;
      used[c] = true;
      stack.push_back(clauses_[c].a);
      stack.push_back(clauses_[c].b);
    }
    std::map<int, int> number;
    std::vector<ProofStep> steps;
    for (size_t i = 0; i < clauses_.size(); ++i) {
      if (!used[i]) continue;
      const PClause &pc = clauses_[i];
      ProofStep s;
      s.id = static_cast<int>(steps.size()) + 1;
      s.clause = Export(pc);
      s.rule = pc.rule;
      if (pc.a >= 0) s.a = number.at(pc.a);
      if (pc.b >= 0) s.b = number.at(pc.b);
      if (pc.rule == ProofStep::Rule::kResolve && pc.b == pc.a) s.b = s.a;
      number[static_cast<int>(i)] = s.id;
      steps.push_back(std::move(s));
    }
    return steps;
  }

  const Budget &budget_;
  Clock::time_point start_;
  bool timed_out_ = false;
  size_t generated_ = 0;
  size_t attempts_ = 0;

  std::vector<std::string> pred_names_;
  std::unordered_map<std::string, int> pred_ids_;
  std::vector<Term> fun_protos_;
  std::unordered_map<std::string, int> fun_ids_;
  TermBank bank_;

  std::vector<PClause> clauses_;
  std::unordered_set<std::vector<int>, VecHash> seen_;
  std::priority_queue<Queued, std::vector<Queued>, std::greater<Queued>> passive_;
  std::vector<int> active_;
  std::unordered_map<int, std::vector<int>> by_pred_;

  std::vector<std::pair<int, int>> bind_;
  std::vector<int> trail_;
};

void ScanGenerated(const Term &t, int *max_sk, int *max_skf) {
  if (t.kind == Term::Kind::kSkolem) *max_sk = std::max(*max_sk, t.id);
  if (t.kind == Term::Kind::kFunction && t.name.size() > 3 && t.name.compare(0, 3, "skf") == 0) {
    try {
      *max_skf = std::max(*max_skf, std::stoi(t.name.substr(3)));
    } catch (...) {
    }
  }
  for (const Term &a : t.args) ScanGenerated(a, max_sk, max_skf);
}

// Independent checker on public types ------------------------------------------

using Subst = std::map<std::string, Term>;

Term Walk(const Term &t, const Subst &s) {
  if (t.is_variable()) {
    auto it = s.find(t.name);
    if (it == s.end()) return t;
    return Walk(it->second, s);
  }
  if (t.args.empty()) return t;
  Term out = t;
  for (Term &a : out.args) a = Walk(a, s);
  return out;
}

bool OccursIn(const std::string &var, const Term &t) {
  if (t.is_variable()) return t.name == var;
  for (const Term &a : t.args) {
    if (OccursIn(var, a)) return true;
  }
  return false;
}

bool UnifyTerms(const Term &x, const Term &y, Subst *s) {
  Term a = Walk(x, *s);
  Term b = Walk(y, *s);
  if (a == b) return true;
  if (a.is_variable()) {
    if (OccursIn(a.name, b)) return false;
    (*s)[a.name] = b;
    return true;
  }
  if (b.is_variable()) return UnifyTerms(b, a, s);
  if (a.kind != b.kind || a.name != b.name || a.id != b.id || a.args.size() != b.args.size()) {
    return false;
  }
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (!UnifyTerms(a.args[i], b.args[i], s)) return false;
  }
  return true;
}

bool UnifyLiterals(const Literal &a, const Literal &b, Subst *s) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (!UnifyTerms(a.args[i], b.args[i], s)) return false;
  }
  return true;
}

Literal ApplyLiteral(const Literal &l, const Subst &s) {
  Literal out = l;
  for (Term &t : out.args) t = Walk(t, s);
  return out;
}

Term SuffixVars(const Term &t, const std::string &suffix) {
  if (t.is_variable()) return Term::Variable(t.name + suffix);
  Term out = t;
  for (Term &a : out.args) a = SuffixVars(a, suffix);
  return out;
}

bool MatchTerm(const Term &p, const Term &d, Subst *theta) {
  if (p.is_variable()) {
    auto it = theta->find(p.name);
    if (it == theta->end()) {
      (*theta)[p.name] = d;
      return true;
    }
    return it->second == d;
  }
  if (d.is_variable() || p.kind != d.kind || p.name != d.name || p.id != d.id ||
      p.args.size() != d.args.size()) {
    return false;
  }
  for (size_t i = 0; i < p.args.size(); ++i) {
    if (!MatchTerm(p.args[i], d.args[i], theta)) return false;
  }
  return true;
}

bool SubsumesRec(const Clause &c, const Clause &d, size_t k, const Subst &theta) {
  if (k == c.literals.size()) return true;
  const Literal &lc = c.literals[k];
  for (const Literal &ld : d.literals) {
    if (ld.positive != lc.positive || ld.predicate != lc.predicate ||
        ld.args.size() != lc.args.size()) {
      continue;
    }
    Subst t = theta;
    bool ok = true;
    for (size_t i = 0; i < lc.args.size() && ok; ++i) ok = MatchTerm(lc.args[i], ld.args[i], &t);
    if (ok && SubsumesRec(c, d, k + 1, t)) return true;
  }
  return false;
}

bool IsVariant(Clause a, Clause b) {
  a.Dedupe();
  b.Dedupe();
  if (a.literals.size() != b.literals.size()) return false;
  return SubsumesRec(a, b, 0, {}) && SubsumesRec(b, a, 0, {});
}

std::vector<Clause> AllResolvents(const Clause &a, const Clause &b_raw) {
  Clause b = b_raw;
  for (Literal &l : b.literals) {
    for (Term &t : l.args) t = SuffixVars(t, "'");
  }
  std::vector<Clause> out;
  for (size_t i = 0; i < a.literals.size(); ++i) {
    for (size_t j = 0; j < b.literals.size(); ++j) {
      if (a.literals[i].positive == b.literals[j].positive) continue;
      Subst s;
      if (!UnifyLiterals(a.literals[i], b.literals[j], &s)) continue;
      Clause r;
      for (size_t k = 0; k < a.literals.size(); ++k) {
        if (k != i) r.literals.push_back(ApplyLiteral(a.literals[k], s));
      }
      for (size_t k = 0; k < b.literals.size(); ++k) {
        if (k != j) r.literals.push_back(ApplyLiteral(b.literals[k], s));
      }
      r.Dedupe();
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<Clause> AllFactors(const Clause &a) {
  std::vector<Clause> out;
  for (size_t i = 0; i < a.literals.size(); ++i) {
    for (size_t j = i + 1; j < a.literals.size(); ++j) {
      if (a.literals[i].positive != a.literals[j].positive) continue;
      Subst s;
      if (!UnifyLiterals(a.literals[i], a.literals[j], &s)) continue;
      Clause r;
      for (const Literal &l : a.literals) r.literals.push_back(ApplyLiteral(l, s));
      r.Dedupe();
      out.push_back(std::move(r));
    }
  }
  return out;
}

bool EvalProp(const Formula &f, const std::map<std::string, int> &index, uint32_t row,
              int n) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kPred:
    case K::kMod: {
      int i = index.at(Render(f));
      return (row >> (n - 1 - i)) & 1u;
    }
    case K::kNot:
      return !EvalProp(f.child(0), index, row, n);
    case K::kAnd:
      return EvalProp(f.child(0), index, row, n) && EvalProp(f.child(1), index, row, n);
    case K::kOr:
      return EvalProp(f.child(0), index, row, n) || EvalProp(f.child(1), index, row, n);
    case K::kImplies:
      return !EvalProp(f.child(0), index, row, n) || EvalProp(f.child(1), index, row, n);
    default:
      throw std::invalid_argument("not a propositional formula: " + Render(f));
  }
}

void CollectPropAtoms(const Formula &f, std::set<std::string> *out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kPred:
    case K::kMod:
      for (const Term &t : f.terms()) {
        if (!t.is_ground()) {
          throw std::invalid_argument("propositional atoms must be ground: " + Render(f));
        }
      }
      out->insert(Render(f));
      return;
    case K::kNot:
    case K::kAnd:
    case K::kOr:
    case K::kImplies:
      for (const Formula &c : f.children()) CollectPropAtoms(c, out);
      return;
    default:
      throw std::invalid_argument("not a propositional formula: " + Render(f));
  }
}

}  // namespace

ProofResult Refute(const std::vector<Clause> &clauses, const Budget &budget) {
  budget.Validate();
  Search s(budget);
  return s.Run(clauses);
}

ProofResult Entails(const std::vector<Clause> &delta, const Formula &goal,
                    const Budget &budget) {
  int max_sk = 0;
  int max_skf = 0;
  for (const Clause &c : delta) {
    for (const Literal &l : c.literals) {
      for (const Term &t : l.args) ScanGenerated(t, &max_sk, &max_skf);
    }
  }
  SkolemCounter counter{max_sk + 1, max_skf + 1};
  std::vector<Clause> all = delta;
  for (Clause &c : ClausifyWithFunctions(Formula::Not(goal), &counter)) {
    all.push_back(std::move(c));
  }
  return Refute(all, budget);
}

EquivalenceResult Equivalent(const std::vector<Clause> &p, const std::vector<Clause> &q,
                             const std::vector<Clause> &background,
                             const Budget &budget) {
  auto one_way = [&](const std::vector<Clause> &from, const std::vector<Clause> &to) {
    if (to.empty()) return Verdict::kProved;
    std::vector<Clause> premises = from;
    premises.insert(premises.end(), background.begin(), background.end());
    return Entails(premises, GoalFromClauses(to), budget).verdict;
  };
  EquivalenceResult r;
  r.p_entails_q = one_way(p, q);
  r.q_entails_p = one_way(q, p);
  if (r.p_entails_q == Verdict::kTimeout || r.q_entails_p == Verdict::kTimeout) {
    r.relation = Equivalence::kTimeout;
  } else if (r.p_entails_q == Verdict::kProved && r.q_entails_p == Verdict::kProved) {
    r.relation = Equivalence::kEquivalent;
  } else if (r.p_entails_q == Verdict::kProved) {
    r.relation = Equivalence::kPStrictlyStronger;
  } else if (r.q_entails_p == Verdict::kProved) {
    r.relation = Equivalence::kQStrictlyStronger;
  } else {
    r.relation = Equivalence::kIncomparable;
  }
  return r;
}

std::string SerializeProof(const std::vector<ProofStep> &steps) {
  std::string out;
  for (const ProofStep &s : steps) {
    out += std::to_string(s.id) + ": " + s.clause.ToString() + " [";
    switch (s.rule) {
      case ProofStep::Rule::kInput:
        out += "input";
        break;
      case ProofStep::Rule::kResolve:
        out += "resolve " + std::to_string(s.a) + " " + std::to_string(s.b);
        break;
      case ProofStep::Rule::kFactor:
        out += "factor " + std::to_string(s.a);
        break;
    }
    out += "]\n";
  }
  return out;
}

std::vector<ProofStep> ParseProof(std::string_view text) {
  std::vector<ProofStep> steps;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    size_t colon = line.find(':');
    size_t bracket = line.rfind(" [");
    if (colon == std::string::npos || bracket == std::string::npos || bracket < colon ||
        line.back() != ']') {
      throw std::invalid_argument("malformed proof line: " + line);
    }
    ProofStep s;
    s.id = std::stoi(line.substr(0, colon));
    s.clause = ParseClause(line.substr(colon + 1, bracket - colon - 1));
    std::istringstream rule(line.substr(bracket + 2, line.size() - bracket - 3));
    std::string name;
    rule >> name;
    if (name == "input") {
      s.rule = ProofStep::Rule::kInput;
    } else if (name == "resolve") {
      s.rule = ProofStep::Rule::kResolve;
      if (!(rule >> s.a >> s.b)) throw std::invalid_argument("resolve needs two parents: " + line);
    } else if (name == "factor") {
      s.rule = ProofStep::Rule::kFactor;
      if (!(rule >> s.a)) throw std::invalid_argument("factor needs a parent: " + line);
    } else {
      throw std::invalid_argument("unknown rule in proof line: " + line);
    }
    steps.push_back(std::move(s));
  }
  return steps;
}

ProofCheck CheckProof(const std::vector<ProofStep> &steps,
                      const std::vector<Clause> &inputs) {
  std::map<int, const Clause *> known;
  auto fail = [](const std::string &why) { return ProofCheck{false, why}; };
  for (const ProofStep &s : steps) {
    if (known.count(s.id)) return fail("duplicate step " + std::to_string(s.id));
    switch (s.rule) {
      case ProofStep::Rule::kInput: {
        bool found = false;
        for (const Clause &c : inputs) {
          if (IsVariant(c, s.clause)) {
            found = true;
            break;
          }
        }
        if (!found) return fail("step " + std::to_string(s.id) + " is not an input clause");
        break;
      }
      case ProofStep::Rule::kResolve: {
        if (!known.count(s.a) || !known.count(s.b)) {
          return fail("step " + std::to_string(s.id) + " cites an unknown parent");
        }
        bool found = false;
        for (const Clause &r : AllResolvents(*known[s.a], *known[s.b])) {
          if (IsVariant(r, s.clause)) {
            found = true;
            break;
          }
        }
        if (!found) return fail("step " + std::to_string(s.id) + " is not a resolvent");
        break;
      }
      case ProofStep::Rule::kFactor: {
        if (!known.count(s.a)) {
          return fail("step " + std::to_string(s.id) + " cites an unknown parent");
        }
        bool found = false;
        for (const Clause &r : AllFactors(*known[s.a])) {
          if (IsVariant(r, s.clause)) {
            found = true;
            break;
          }
        }
        if (!found) return fail("step " + std::to_string(s.id) + " is not a factor");
        break;
      }
    }
    known[s.id] = &s.clause;
  }
  if (steps.empty() || !steps.back().clause.empty()) {
    return fail("proof does not end in the empty clause");
  }
  return {true, ""};
}

PropModels PropDecide(const Formula &f) {
  std::set<std::string> atoms;
  CollectPropAtoms(f, &atoms);
  if (atoms.size() > static_cast<size_t>(kMaxPropAtoms)) {
    throw std::invalid_argument("too many atoms for truth-table decision: " +
                                std::to_string(atoms.size()));
  }
  PropModels out;
  out.atoms.assign(atoms.begin(), atoms.end());
  std::map<std::string, int> index;
  for (size_t i = 0; i < out.atoms.size(); ++i) index[out.atoms[i]] = static_cast<int>(i);
  int n = static_cast<int>(out.atoms.size());
  uint32_t rows = uint32_t{1} << n;
  for (uint32_t row = 0; row < rows; ++row) {
    if (!EvalProp(f, index, row, n)) continue;
    std::vector<bool> model(n);
    for (int i = 0; i < n; ++i) model[i] = (row >> (n - 1 - i)) & 1u;
    out.models.push_back(std::move(model));
  }
  out.satisfiable = !out.models.empty();
  return out;
}

}  // namespace claims
