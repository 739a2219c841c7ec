/* Copyright 2026 The TDAM Tracker Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef TDAM_ASSOC_HUNGARIAN_HPP_
#define TDAM_ASSOC_HUNGARIAN_HPP_

#include <utility>
#include <vector>

#include "tdam/common.hpp"

namespace tdam::assoc {

struct Assignment {
  // (row, column) pairs sorted by row.
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> unmatched_rows;
  std::vector<int> unmatched_cols;

  bool operator==(const Assignment&) const = default;
};

// Minimum-cost assignment on a rectangular matrix in which +inf marks a
// forbidden edge. Among all matchings that use only finite edges, the result
// has maximum cardinality and, within that, minimum total cost. Forbidden
// edges are handled as a lexicographic (count, cost) pair inside the
// shortest-augmenting-path solver, so no big-M constant enters the sums.
Assignment Hungarian(const Matrix& cost);

// Moves every pair whose cost is not strictly below `gate` to the unmatched
// sets.
Assignment GateAssignment(const Assignment& assignment, const Matrix& cost,
                          double gate);

double TotalCost(const Assignment& assignment, const Matrix& cost);

}  // namespace tdam::assoc

#endif  // TDAM_ASSOC_HUNGARIAN_HPP_
