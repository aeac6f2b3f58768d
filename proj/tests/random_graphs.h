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

#ifndef CLAIMS_TESTS_RANDOM_GRAPHS_H_
#define CLAIMS_TESTS_RANDOM_GRAPHS_H_

#include <random>
#include <vector>

#include "claims/matcher.h"
#include "random_clauses.h"

namespace claims::testing {

struct RandomGraph {
  MatchGraph graph;
  // Integer weights (score x 5), -1 for no edge, indexed like the node lists.
  std::vector<std::vector<int64_t>> weights;
};

// Random match graph with up to max_bill x max_bench nodes and edge scores
// drawn from {none, 3/5, 1}.
inline RandomGraph MakeRandomGraph(std::mt19937 *rng, int max_bill, int max_bench) {
  RandomGraph rg;
  int rows = Uniform(rng, 0, max_bill);
  int cols = Uniform(rng, 0, max_bench);
  for (int i = 1; i <= rows; ++i) rg.graph.bill_nodes.push_back({i, {i}, {}});
  for (int j = 1; j <= cols; ++j) rg.graph.bench_nodes.push_back({j, {j}, {}});
  rg.weights.assign(rows, std::vector<int64_t>(cols, -1));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      int kind = Uniform(rng, 0, 2);
      if (kind == 0) continue;
      Rational score = kind == 1 ? Rational(3, 5) : Rational(1);
      rg.graph.edges.push_back({i + 1, j + 1, score, {}});
      rg.weights[i][j] = kind == 1 ? 3 : 5;
    }
  }
  return rg;
}

}  // namespace claims::testing

#endif  // CLAIMS_TESTS_RANDOM_GRAPHS_H_
