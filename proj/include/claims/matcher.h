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

// Entailment-scored bipartite matching between bill and benchmark lines.

#ifndef CLAIMS_MATCHER_H_
#define CLAIMS_MATCHER_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "claims/clause.h"
#include "claims/ontology.h"
#include "claims/prover.h"
#include "claims/rational.h"

namespace claims {

// One node of the match graph: a single line or a group of lines.
struct LineNode {
  // Smallest member line id; nodes are identified by it.
  int id = 0;
  std::vector<int> lines;
  std::vector<Clause> clauses;
};

// A line's id and lowered clauses, the input to GroupLines.
struct LineDelta {
  int id = 0;
  DeltaSet delta;
};

struct MatchEdge {
  int bill = 0;   // node id
  int bench = 0;  // node id
  Rational score;
  EquivalenceResult relation;
};

struct MatchGraph {
  std::vector<LineNode> bill_nodes;
  std::vector<LineNode> bench_nodes;
  std::vector<MatchEdge> edges;
  // Some pair timed out; its edge is missing.
  bool incomplete = false;

  const MatchEdge *Edge(int bill, int bench) const;
};

struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // (bill node id, bench node id), by bill id
  std::vector<int> unmatched_bill;
  std::vector<int> unmatched_benchmark;
  Rational total_score;
};

// 1 for EQUIVALENT, 3/5 for a one-directional entailment, 0 (no edge)
// otherwise.
Rational EdgeScore(Equivalence relation);

// Conjunction of the lines' fol and modal clauses with Skolem and event
// constants renamed apart. The node id is the smallest line id.
LineNode MergeLines(std::vector<LineDelta> lines);

// Merges lines whose predicates share a part_of whole into one node whose
// clauses are the conjunction of the members' clauses (Skolem constants are
// renamed apart). Other lines stay singletons. Nodes are ordered by id.
std::vector<LineNode> GroupLines(const std::vector<LineDelta> &lines, const Ontology *ontology);

MatchGraph BuildMatchGraph(std::vector<LineNode> bill, std::vector<LineNode> bench,
                           const std::vector<Clause> &background, const Budget &budget);

// Maximum-total-score matching; ties resolved to the lexicographically
// smallest pair list.
Assignment SolveAssignment(const MatchGraph &graph);

// Maximum-weight assignment on a dense matrix; weight < 0 marks a missing
// edge. Returns the total and, per row, the matched column or -1.
int64_t MaxWeightAssignment(const std::vector<std::vector<int64_t>> &weight,
                            std::vector<int> *row_match = nullptr);

}  // namespace claims

#endif  // CLAIMS_MATCHER_H_
