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

#include "claims/clause.h"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <tuple>

namespace claims {

namespace {

std::string TrimCopy(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Splits on `sep` at parenthesis depth zero.
std::vector<std::string> SplitTopLevel(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(std::string(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(std::string(s.substr(start)));
  return out;
}

}  // namespace

std::string Literal::ToString() const {
  std::string out = positive ? "" : "-";
  out += predicate;
  if (!args.empty()) {
    out += "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i > 0) out += ",";
      out += args[i].ToString();
    }
    out += ")";
  }
  return out;
}

bool Literal::operator==(const Literal &other) const {
  return positive == other.positive && predicate == other.predicate &&
         args == other.args;
}

bool Literal::operator<(const Literal &other) const {
  return std::tie(predicate, positive, args) <
         std::tie(other.predicate, other.positive, other.args);
}

bool Clause::IsTautology() const {
  for (size_t i = 0; i < literals.size(); ++i) {
    for (size_t j = i + 1; j < literals.size(); ++j) {
      if (literals[i].IsComplementOf(literals[j])) return true;
    }
  }
  return false;
}

bool Clause::IsGround() const {
  for (const Literal &l : literals) {
    for (const Term &t : l.args) {
      if (!t.is_ground()) return false;
    }
  }
  return true;
}

void Clause::Dedupe() {
  std::vector<Literal> out;
  for (Literal &l : literals) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
  }
  literals = std::move(out);
}

std::string Clause::ToString() const {
  if (literals.empty()) return "[]";
  std::string out;
  for (size_t i = 0; i < literals.size(); ++i) {
    if (i > 0) out += " | ";
    out += literals[i].ToString();
  }
  return out;
}

Literal ParseLiteral(std::string_view text) {
  std::string s = TrimCopy(text);
  Literal lit;
  size_t pos = 0;
  if (!s.empty() && s[0] == '-') {
    lit.positive = false;
    pos = 1;
  }
  size_t paren = s.find('(', pos);
  if (paren == std::string::npos) {
    lit.predicate = TrimCopy(std::string_view(s).substr(pos));
  } else {
    if (s.back() != ')') throw FormulaSyntaxError("unbalanced literal '" + s + "'", 0);
    lit.predicate = TrimCopy(std::string_view(s).substr(pos, paren - pos));
    std::string inner = s.substr(paren + 1, s.size() - paren - 2);
    for (const std::string &arg : SplitTopLevel(inner, ',')) {
      lit.args.push_back(ParseTerm(arg));
    }
  }
  if (lit.predicate.empty()) throw FormulaSyntaxError("empty predicate in '" + s + "'", 0);
  for (char c : lit.predicate) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
      throw FormulaSyntaxError("bad predicate name '" + lit.predicate + "'", 0);
    }
  }
  return lit;
}

Clause ParseClause(std::string_view text) {
  std::string s = TrimCopy(text);
  Clause c;
  if (s == "[]") return c;
  for (const std::string &part : SplitTopLevel(s, '|')) {
    c.literals.push_back(ParseLiteral(part));
  }
  return c;
}

std::string ClausesToString(const std::vector<Clause> &clauses) {
  std::string out;
  for (const Clause &c : clauses) out += c.ToString() + "\n";
  return out;
}

std::vector<Clause> ParseClauses(std::string_view text) {
  std::vector<Clause> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string t = TrimCopy(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back(ParseClause(t));
  }
  return out;
}

std::string DeltaSet::Serialize() const {
  std::string out;
  if (!fol.empty()) {
    out += "[fol]\n";
    out += ClausesToString(fol);
  }
  if (!temporal.empty()) {
    out += "[temporal]\n";
    for (const TemporalFact &t : temporal) {
      out += "before(" + t.earlier.ToString() + "," + t.later.ToString() + ")\n";
    }
  }
  if (!modal.empty()) {
    out += "[modal]\n";
    out += ClausesToString(modal);
  }
  return out;
}

DeltaSet DeltaSet::Parse(std::string_view text) {
  DeltaSet d;
  std::istringstream in{std::string(text)};
  std::string line;
  enum class Section { kNone, kFol, kTemporal, kModal } section = Section::kNone;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = TrimCopy(line);
    if (t.empty() || t[0] == '#') continue;
    if (t == "[fol]") {
      section = Section::kFol;
    } else if (t == "[temporal]") {
      section = Section::kTemporal;
    } else if (t == "[modal]") {
      section = Section::kModal;
    } else if (section == Section::kFol) {
      d.fol.push_back(ParseClause(t));
    } else if (section == Section::kModal) {
      d.modal.push_back(ParseClause(t));
    } else if (section == Section::kTemporal) {
      Literal l = ParseLiteral(t);
      if (!l.positive || l.predicate != "before" || l.args.size() != 2) {
        throw FormulaSyntaxError("bad temporal fact on line " + std::to_string(line_no), 0);
      }
      d.temporal.push_back({l.args[0], l.args[1]});
    } else {
      throw FormulaSyntaxError("content before section header on line " +
                                   std::to_string(line_no),
                               0);
    }
  }
  return d;
}

std::set<std::string> DeltaSet::Predicates() const {
  std::set<std::string> out;
  for (const auto *set : {&fol, &modal}) {
    for (const Clause &c : *set) {
      for (const Literal &l : c.literals) out.insert(l.predicate);
    }
  }
  return out;
}

}  // namespace claims
