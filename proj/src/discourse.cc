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

#include "claims/discourse.h"

#include <algorithm>

namespace claims {

Referent *DiscourseContext::FindReferent(const std::string &var) {
  for (Referent &r : referents) {
    if (r.term.is_variable() && r.term.name == var) return &r;
  }
  return nullptr;
}

const Referent *DiscourseContext::FindReferent(const std::string &var) const {
  return const_cast<DiscourseContext *>(this)->FindReferent(var);
}

VerbOccurrence *DiscourseContext::FindVerb(int id) {
  for (VerbOccurrence &v : verbs) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

const VerbOccurrence *DiscourseContext::FindVerb(int id) const {
  return const_cast<DiscourseContext *>(this)->FindVerb(id);
}

void DiscourseContext::Substitute(const std::string &var, const Term &target) {
  for (SentenceRecord &s : sentences) {
    for (Formula &f : s.readings) f = claims::Substitute(f, var, target);
  }
  for (VerbOccurrence &v : verbs) {
    for (Term &t : v.args) {
      if (t.is_variable() && t.name == var) t = target;
    }
  }
  auto it = std::find_if(referents.begin(), referents.end(), [&](const Referent &r) {
    return r.term.is_variable() && r.term.name == var;
  });
  if (it == referents.end()) return;
  Referent removed = std::move(*it);
  referents.erase(it);
  if (!target.is_variable()) return;
  Referent *keep = FindReferent(target.name);
  if (keep == nullptr) return;
  for (const std::string &s : removed.sorts) {
    if (std::find(keep->sorts.begin(), keep->sorts.end(), s) == keep->sorts.end()) {
      keep->sorts.push_back(s);
    }
  }
  for (const Mention &m : removed.mentions) {
    if (std::find(keep->mentions.begin(), keep->mentions.end(), m) ==
        keep->mentions.end()) {
      keep->mentions.push_back(m);
    }
  }
  std::sort(keep->mentions.begin(), keep->mentions.end(),
            [](const Mention &a, const Mention &b) {
              return std::tie(a.sentence, a.clause) < std::tie(b.sentence, b.clause);
            });
}

void DiscourseContext::RewriteOccurrence(
    int id, const std::function<Formula(const Formula &)> &fn) {
  for (SentenceRecord &s : sentences) {
    for (Formula &f : s.readings) {
      f = MapAtoms(f, [&](const Formula &atom) {
        if (atom.occurrence() == id) return fn(atom);
        return atom;
      });
    }
  }
}

std::vector<Formula> DiscourseContext::DiscourseReadings(size_t cap) const {
  std::vector<std::vector<Formula>> combos = {{}};
  for (const SentenceRecord &s : sentences) {
    if (s.readings.empty()) continue;
    std::vector<std::vector<Formula>> next;
    for (const auto &prefix : combos) {
      for (const Formula &r : s.readings) {
        if (next.size() >= cap) break;
        std::vector<Formula> parts = prefix;
        for (const Formula &c : r.Conjuncts()) parts.push_back(c);
        next.push_back(std::move(parts));
      }
    }
    combos = std::move(next);
  }
  std::vector<Formula> out;
  for (const auto &parts : combos) {
    if (parts.empty()) continue;
    out.push_back(Formula::Conjoin(parts));
  }
  return out;
}

}  // namespace claims
