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

#ifndef CLAIMS_FORMULA_H_
#define CLAIMS_FORMULA_H_

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace claims {

// A logical term. Variables are named x1, x2, ...; Skolem constants and event
// constants are generated and never collide with authored constants because
// the names sk<n>, skf<n> and e<n> are reserved.
struct Term {
  enum class Kind { kVariable, kConstant, kSkolem, kEvent, kFunction };

  Kind kind = Kind::kConstant;
  std::string name;         // variable, constant or function symbol name
  int id = 0;               // Skolem / event number
  std::vector<Term> args;   // function arguments (prover-internal Skolem functions)

  static Term Variable(std::string name);
  static Term Var(int index) { return Variable("x" + std::to_string(index)); }
  static Term Constant(std::string name);
  static Term Skolem(int id);
  static Term Event(int id);
  static Term Function(std::string name, std::vector<Term> args);

  bool is_variable() const { return kind == Kind::kVariable; }
  bool is_ground() const;

  std::string ToString() const;

  bool operator==(const Term &other) const;
  bool operator!=(const Term &other) const { return !(*this == other); }
  bool operator<(const Term &other) const;
};

// True if `name` matches one of the reserved generated-name patterns.
bool IsReservedConstantName(std::string_view name);

// Parses a single term in rendered form (x3, sk2, e1, skf1(x1), john).
Term ParseTerm(std::string_view text);

// Tense subscript carried by verb-derived predicates.
enum class GammaTense { kNone, kPast, kFuture };

enum class ModKind { kPossessive, kAttributive };

class Formula;

// Argument of a higher-order predicate: either a formula or a term.
using HigherArg = std::variant<Formula, Term>;

// Immutable AST node for intensional formulae and their first-order subset.
// Copies share structure.
class Formula {
 public:
  enum class Kind {
    kPred,
    kMod,
    kNot,
    kAnd,
    kOr,
    kImplies,
    kForAll,
    kExists,
    kHigher,
    kBox,
    kDiamond,
  };

  static Formula Pred(std::string name, std::vector<Term> args,
                      GammaTense tense = GammaTense::kNone,
                      bool intensional = false,
                      std::optional<int> occurrence = std::nullopt);
  static Formula Mod(Term x, Term y, ModKind kind);
  static Formula Not(Formula f);
  static Formula And(Formula f, Formula g);
  static Formula Or(Formula f, Formula g);
  static Formula Implies(Formula f, Formula g);
  static Formula ForAll(std::string var, Formula f);
  static Formula Exists(std::string var, Formula f);
  static Formula Higher(std::string name, std::vector<HigherArg> args);
  static Formula Box(Formula f);
  static Formula Diamond(Formula f);

  // Left-nested conjunction of all parts. Requires a non-empty list.
  static Formula Conjoin(const std::vector<Formula> &parts);

  Kind kind() const { return node_->kind; }
  const std::string &name() const { return node_->name; }
  const std::vector<Term> &terms() const { return node_->terms; }
  GammaTense tense() const { return node_->tense; }
  bool intensional() const { return node_->intensional; }
  ModKind mod_kind() const { return node_->mod_kind; }
  // Verb occurrence id in the owning discourse. Not part of the rendered form.
  std::optional<int> occurrence() const { return node_->occurrence; }
  const std::string &var() const { return node_->name; }
  const Formula &child(int i) const { return node_->children[i]; }
  const std::vector<Formula> &children() const { return node_->children; }
  const std::vector<HigherArg> &higher_args() const { return node_->higher_args; }

  bool is_binary() const {
    return kind() == Kind::kAnd || kind() == Kind::kOr ||
           kind() == Kind::kImplies;
  }
  bool is_atomic() const {
    return kind() == Kind::kPred || kind() == Kind::kMod;
  }

  // Flattens the left spine of a conjunction into its parts.
  std::vector<Formula> Conjuncts() const;

  // Structural equality including annotations.
  bool operator==(const Formula &other) const;
  bool operator!=(const Formula &other) const { return !(*this == other); }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Term> terms;
    GammaTense tense = GammaTense::kNone;
    bool intensional = false;
    ModKind mod_kind = ModKind::kPossessive;
    std::optional<int> occurrence;
    std::vector<Formula> children;
    std::vector<HigherArg> higher_args;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula Make(Node node);

  std::shared_ptr<const Node> node_;
};

class FormulaSyntaxError : public std::runtime_error {
 public:
  FormulaSyntaxError(const std::string &message, size_t offset)
      : std::runtime_error(message + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// Renders a formula in the textual formula grammar. The outermost binary
// chain and quantifier bodies are written without redundant parentheses.
std::string Render(const Formula &f);

// Parses the textual formula grammar produced by Render.
Formula ParseFormula(std::string_view text);

// Applies `fn` to every atomic node (Pred and Mod) bottom-up and rebuilds.
Formula MapAtoms(const Formula &f,
                 const std::function<Formula(const Formula &)> &fn);

// Replaces free occurrences of variable `var` by `replacement`.
Formula Substitute(const Formula &f, const std::string &var,
                   const Term &replacement);

// Free variable names in order of first occurrence.
std::vector<std::string> FreeVariables(const Formula &f);

// Collects every variable name, bound or free.
void CollectVariables(const Formula &f, std::set<std::string> *out);

// Renames all variables to x1, x2, ... in order of first occurrence in the
// rendered form. Two formulae that differ only by variable naming become equal.
Formula CanonicalizeVariables(const Formula &f);

// Drops non-rendered annotations (verb occurrence ids).
Formula StripAnnotations(const Formula &f);

// True if the formula contains a higher-order predicate anywhere.
bool ContainsHigher(const Formula &f);

// True if the formula contains a modal operator anywhere.
bool ContainsModal(const Formula &f);

}  // namespace claims

#endif  // CLAIMS_FORMULA_H_
