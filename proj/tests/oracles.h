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

// Reference implementations used only as test oracles. They share no code
// with the library beyond the public Term/Clause/Formula value types.

#ifndef CLAIMS_TESTS_ORACLES_H_
#define CLAIMS_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "claims/clause.h"
#include "claims/formula.h"

namespace claims::oracle {

// Satisfiability of a function-free clause set by grounding over its
// constants (plus one fresh constant when there are none) and exhaustive
// backtracking over the resulting Herbrand interpretations.
class HerbrandChecker {
 public:
  explicit HerbrandChecker(const std::vector<Clause> &clauses) {
    std::set<std::string> consts;
    for (const Clause &c : clauses) {
      for (const Literal &l : c.literals) {
        for (const Term &t : l.args) {
          if (!t.is_variable()) consts.insert(t.ToString());
        }
      }
    }
    if (consts.empty()) consts.insert("c0");
    constants_.assign(consts.begin(), consts.end());
    for (const Clause &c : clauses) Ground(c);
  }

  bool Satisfiable() {
    values_.assign(atoms_.size(), 0);
    return Search();
  }

 private:
  int AtomId(const std::string &key) {
    auto it = atom_ids_.find(key);
    if (it != atom_ids_.end()) return it->second;
    int id = static_cast<int>(atoms_.size());
    atoms_.push_back(key);
    atom_ids_.emplace(key, id);
    return id;
  }

  void Ground(const Clause &c) {
    std::vector<std::string> vars;
    for (const Literal &l : c.literals) {
      for (const Term &t : l.args) {
        if (t.is_variable() && std::find(vars.begin(), vars.end(), t.name) == vars.end()) {
          vars.push_back(t.name);
        }
      }
    }
    std::vector<size_t> pick(vars.size(), 0);
    while (true) {
      std::vector<int> ground;
      bool taut = false;
      for (const Literal &l : c.literals) {
        std::string key = l.predicate + "(";
        for (const Term &t : l.args) {
          if (t.is_variable()) {
            size_t i = std::find(vars.begin(), vars.end(), t.name) - vars.begin();
            key += constants_[pick[i]];
          } else {
            key += t.ToString();
          }
          key += ",";
        }
        int id = AtomId(key);
        int lit = l.positive ? id + 1 : -(id + 1);
        if (std::find(ground.begin(), ground.end(), -lit) != ground.end()) taut = true;
        if (std::find(ground.begin(), ground.end(), lit) == ground.end()) ground.push_back(lit);
      }
      if (!taut) clauses_.push_back(ground);
      size_t k = 0;
      while (k < pick.size() && ++pick[k] == constants_.size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }

  // 0 unassigned, 1 true, -1 false.
  int Value(int lit) const {
    int v = values_[std::abs(lit) - 1];
    return lit > 0 ? v : -v;
  }

  bool Search() {
    // Unit propagation to a fixpoint, then branch on the first open atom.
    std::vector<int> assigned;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto &c : clauses_) {
        int open = 0;
        int last = 0;
        bool sat = false;
        for (int lit : c) {
          int v = Value(lit);
          if (v == 1) {
            sat = true;
            break;
          }
          if (v == 0) {
            ++open;
            last = lit;
          }
        }
        if (sat) continue;
        if (open == 0) {
          for (int a : assigned) values_[a] = 0;
          return false;
        }
        if (open == 1) {
          values_[std::abs(last) - 1] = last > 0 ? 1 : -1;
          assigned.push_back(std::abs(last) - 1);
          changed = true;
        }
      }
    }
    int branch = -1;
    for (size_t i = 0; i < values_.size(); ++i) {
      if (values_[i] == 0) {
        branch = static_cast<int>(i);
        break;
      }
    }
    if (branch < 0) return true;
    for (int v : {1, -1}) {
      values_[branch] = v;
      if (Search()) return true;
    }
    values_[branch] = 0;
    for (int a : assigned) values_[a] = 0;
    return false;
  }

  std::vector<std::string> constants_;
  std::vector<std::string> atoms_;
  std::map<std::string, int> atom_ids_;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> values_;
};

inline bool HerbrandSatisfiable(const std::vector<Clause> &clauses) {
  HerbrandChecker h(clauses);
  return h.Satisfiable();
}

// Truth value of a closed first-order formula in a finite structure whose
// domain is {0..n-1}; constants are interpreted through `constants` and
// predicates through `holds`.
struct FiniteModel {
  int domain = 1;
  std::map<std::string, int> constants;
  std::set<std::pair<std::string, std::vector<int>>> facts;

  int Eval(const Term &t, const std::map<std::string, int> &env) const {
    if (t.is_variable()) return env.at(t.name);
    return constants.at(t.ToString());
  }

  bool Holds(const Formula &f, std::map<std::string, int> *env) const {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::kPred:
      case K::kMod: {
        std::vector<int> args;
        for (const Term &t : f.terms()) args.push_back(Eval(t, *env));
        std::string name = f.kind() == K::kMod ? "mod" : f.name();
        return facts.count({name, args}) > 0;
      }
      case K::kNot:
        return !Holds(f.child(0), env);
      case K::kAnd:
        return Holds(f.child(0), env) && Holds(f.child(1), env);
      case K::kOr:
        return Holds(f.child(0), env) || Holds(f.child(1), env);
      case K::kImplies:
        return !Holds(f.child(0), env) || Holds(f.child(1), env);
      case K::kForAll:
      case K::kExists: {
        bool forall = f.kind() == K::kForAll;
        auto saved = env->find(f.var()) != env->end()
                         ? std::optional<int>(env->at(f.var()))
                         : std::nullopt;
        bool result = forall;
        for (int d = 0; d < domain; ++d) {
          (*env)[f.var()] = d;
          bool h = Holds(f.child(0), env);
          if (forall && !h) {
            result = false;
            break;
          }
          if (!forall && h) {
            result = true;
            break;
          }
        }
        if (saved) {
          (*env)[f.var()] = *saved;
        } else {
          env->erase(f.var());
        }
        return result;
      }
      default:
        return false;
    }
  }
};

// Enumerates every structure over domains 1..max_domain for the given
// predicate signature (name -> arity) and constants, calling `visit` until it
// returns false.
inline void EnumerateModels(const std::map<std::string, int> &signature,
                            const std::vector<std::string> &constants, int max_domain,
                            const std::function<bool(const FiniteModel &)> &visit) {
  for (int n = 1; n <= max_domain; ++n) {
    std::vector<std::pair<std::string, std::vector<int>>> cells;
    for (const auto &[name, arity] : signature) {
      std::vector<int> args(arity, 0);
      while (true) {
        cells.push_back({name, args});
        int k = 0;
        while (k < arity && ++args[k] == n) args[k++] = 0;
        if (k == arity) break;
      }
    }
    if (cells.size() > 20) continue;
    std::vector<int> cmap(constants.size(), 0);
    while (true) {
      for (uint64_t bits = 0; bits < (uint64_t{1} << cells.size()); ++bits) {
        FiniteModel m;
        m.domain = n;
        for (size_t i = 0; i < constants.size(); ++i) m.constants[constants[i]] = cmap[i];
        for (size_t i = 0; i < cells.size(); ++i) {
          if (bits >> i & 1) m.facts.insert(cells[i]);
        }
        if (!visit(m)) return;
      }
      size_t k = 0;
      while (k < cmap.size() && ++cmap[k] == n) cmap[k++] = 0;
      if (k == cmap.size()) break;
    }
  }
}

// Maximum total weight over all partial injections rows -> columns, where
// weight[i][j] < 0 marks a missing edge.
inline int64_t BruteForceAssignment(const std::vector<std::vector<int64_t>> &weight) {
  size_t rows = weight.size();
  size_t cols = rows == 0 ? 0 : weight[0].size();
  std::vector<bool> used(cols, false);
  std::function<int64_t(size_t)> rec = [&](size_t i) -> int64_t {
    if (i == rows) return 0;
    int64_t best = rec(i + 1);
    for (size_t j = 0; j < cols; ++j) {
      if (used[j] || weight[i][j] < 0) continue;
      used[j] = true;
      best = std::max(best, weight[i][j] + rec(i + 1));
      used[j] = false;
    }
    return best;
  };
  return rec(0);
}

}  // namespace claims::oracle

#endif  // CLAIMS_TESTS_ORACLES_H_
