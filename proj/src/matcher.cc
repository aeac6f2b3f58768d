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

#include "claims/matcher.h"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace claims {
namespace {

// Edge weights are scores scaled to integers.
constexpr int64_t kScale = 5;

Term Shift(const Term &t, int skolem_offset, int event_offset, int *max_skolem, int *max_event) {
  if (t.kind == Term::Kind::kSkolem) {
    *max_skolem = std::max(*max_skolem, t.id + skolem_offset);
    return Term::Skolem(t.id + skolem_offset);
  }
  if (t.kind == Term::Kind::kEvent) {
    *max_event = std::max(*max_event, t.id + event_offset);
    return Term::Event(t.id + event_offset);
  }
  return t;
}

int64_t Weight(const Rational &score) {
  Rational scaled = score * Rational(kScale);
  return scaled.num() / scaled.den();
}

bool ByNodeId(const LineNode &a, const LineNode &b) { return a.id < b.id; }

}  // namespace

const MatchEdge *MatchGraph::Edge(int bill, int bench) const {
  for (const MatchEdge &e : edges) {
    if (e.bill == bill && e.bench == bench) return &e;
  }
  return nullptr;
}

Rational EdgeScore(Equivalence relation) {
  switch (relation) {
    case Equivalence::kEquivalent: return Rational(1);
    case Equivalence::kPStrictlyStronger:
    case Equivalence::kQStrictlyStronger: return Rational(3, 5);
    default: return Rational(0);
  }
}

LineNode MergeLines(std::vector<LineDelta> lines) {
  std::sort(lines.begin(), lines.end(),
            [](const LineDelta &a, const LineDelta &b) { return a.id < b.id; });
  LineNode node;
  if (!lines.empty()) node.id = lines[0].id;
  int max_skolem = 0;
  int max_event = 0;
  for (const LineDelta &line : lines) {
    node.lines.push_back(line.id);
    int skolem_offset = max_skolem;
    int event_offset = max_event;
    for (const auto *part : {&line.delta.fol, &line.delta.modal}) {
      for (const Clause &c : *part) {
        Clause shifted;
        for (const Literal &l : c.literals) {
          Literal m = l;
          for (Term &t : m.args) t = Shift(t, skolem_offset, event_offset, &max_skolem, &max_event);
          shifted.literals.push_back(std::move(m));
        }
        node.clauses.push_back(std::move(shifted));
      }
    }
  }
  return node;
}

std::vector<LineNode> GroupLines(const std::vector<LineDelta> &lines, const Ontology *ontology) {
  size_t n = lines.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  if (ontology != nullptr) {
    std::map<std::string, size_t> first_with_whole;
    for (size_t i = 0; i < n; ++i) {
      for (const std::string &pred : lines[i].delta.Predicates()) {
        for (const std::string &whole : ontology->WholesOf(pred)) {
          auto [it, inserted] = first_with_whole.emplace(whole, i);
          if (!inserted) parent[find(i)] = find(it->second);
        }
      }
    }
  }
  std::map<size_t, std::vector<size_t>> members;
  for (size_t i = 0; i < n; ++i) members[find(i)].push_back(i);

  std::vector<LineNode> out;
  for (auto &[root, idx] : members) {
    std::vector<LineDelta> group;
    for (size_t i : idx) group.push_back(lines[i]);
    out.push_back(MergeLines(group));
  }
  std::sort(out.begin(), out.end(), ByNodeId);
  return out;
}

MatchGraph BuildMatchGraph(std::vector<LineNode> bill, std::vector<LineNode> bench,
                           const std::vector<Clause> &background, const Budget &budget) {
  MatchGraph g;
  std::sort(bill.begin(), bill.end(), ByNodeId);
  std::sort(bench.begin(), bench.end(), ByNodeId);
  g.bill_nodes = std::move(bill);
  g.bench_nodes = std::move(bench);
  for (const LineNode &p : g.bill_nodes) {
    for (const LineNode &q : g.bench_nodes) {
      EquivalenceResult r = Equivalent(p.clauses, q.clauses, background, budget);
      if (r.relation == Equivalence::kTimeout) {
        g.incomplete = true;
        continue;
      }
      Rational score = EdgeScore(r.relation);
      if (score == Rational(0)) continue;
      g.edges.push_back({p.id, q.id, score, r});
    }
  }
  return g;
}

int64_t MaxWeightAssignment(const std::vector<std::vector<int64_t>> &weight,
                            std::vector<int> *row_match) {
  size_t rows = weight.size();
  size_t cols = rows == 0 ? 0 : weight[0].size();
  if (row_match != nullptr) row_match->assign(rows, -1);
  size_t n = std::max(rows, cols);
  if (n == 0) return 0;
  auto profit = [&](size_t i, size_t j) -> int64_t {
    if (i >= rows || j >= cols) return 0;
    return std::max<int64_t>(0, weight[i][j]);
  };
  int64_t top = 0;
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) top = std::max(top, profit(i, j));
  }
  // Hungarian algorithm (potentials, 1-indexed) minimising top - profit.
  const int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
  std::vector<int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<size_t> p(n + 1, 0), way(n + 1, 0);
  for (size_t i = 1; i <= n; ++i) {
    p[0] = i;
    size_t j0 = 0;
    std::vector<int64_t> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      size_t i0 = p[j0];
      size_t j1 = 0;
      int64_t delta = kInf;
      for (size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        int64_t cur = (top - profit(i0 - 1, j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  int64_t total = 0;
  for (size_t j = 1; j <= n; ++j) {
    size_t i = p[j] - 1;
    size_t c = j - 1;
    if (i < rows && c < cols && weight[i][c] > 0) {
      total += weight[i][c];
      if (row_match != nullptr) (*row_match)[i] = static_cast<int>(c);
    }
  }
  return total;
}

Assignment SolveAssignment(const MatchGraph &graph) {
  std::vector<int> bill_ids;
  std::vector<int> bench_ids;
  for (const LineNode &n : graph.bill_nodes) bill_ids.push_back(n.id);
  for (const LineNode &n : graph.bench_nodes) bench_ids.push_back(n.id);
  std::sort(bill_ids.begin(), bill_ids.end());
  std::sort(bench_ids.begin(), bench_ids.end());
  size_t rows = bill_ids.size();
  size_t cols = bench_ids.size();
  std::vector<std::vector<int64_t>> w(rows, std::vector<int64_t>(cols, -1));
  for (const MatchEdge &e : graph.edges) {
    size_t i = std::lower_bound(bill_ids.begin(), bill_ids.end(), e.bill) - bill_ids.begin();
    size_t j = std::lower_bound(bench_ids.begin(), bench_ids.end(), e.bench) - bench_ids.begin();
    if (i < rows && j < cols) w[i][j] = Weight(e.score);
  }
  int64_t best = MaxWeightAssignment(w);

  // Optimum of the rows from `first` on, over the columns not yet used.
  std::vector<bool> col_used(cols, false);
  auto rest = [&](size_t first) {
    std::vector<size_t> free_cols;
    for (size_t j = 0; j < cols; ++j) {
      if (!col_used[j]) free_cols.push_back(j);
    }
    std::vector<std::vector<int64_t>> sub;
    for (size_t i = first; i < rows; ++i) {
      std::vector<int64_t> row;
      for (size_t j : free_cols) row.push_back(w[i][j]);
      sub.push_back(std::move(row));
    }
    return MaxWeightAssignment(sub);
  };

  Assignment a;
  int64_t fixed = 0;
  for (size_t i = 0; i < rows; ++i) {
    bool matched = false;
    for (size_t j = 0; j < cols && !matched; ++j) {
      if (col_used[j] || w[i][j] <= 0) continue;
      col_used[j] = true;
      if (fixed + w[i][j] + rest(i + 1) == best) {
        fixed += w[i][j];
        a.pairs.push_back({bill_ids[i], bench_ids[j]});
        matched = true;
      } else {
        col_used[j] = false;
      }
    }
    if (!matched) a.unmatched_bill.push_back(bill_ids[i]);
  }
  for (size_t j = 0; j < cols; ++j) {
    if (!col_used[j]) a.unmatched_benchmark.push_back(bench_ids[j]);
  }
  a.total_score = Rational(best, kScale);
  return a;
}

}  // namespace claims
