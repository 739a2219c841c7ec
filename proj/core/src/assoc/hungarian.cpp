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

#include "tdam/assoc/hungarian.hpp"

#include <algorithm>
#include <cmath>

namespace tdam::assoc {

namespace {

// Ordered group element: number of forbidden edges first, then real cost.
struct LexCost {
  long forbidden = 0;
  double value = 0.0;

  LexCost operator+(const LexCost& o) const {
    return {forbidden + o.forbidden, value + o.value};
  }
  LexCost operator-(const LexCost& o) const {
    return {forbidden - o.forbidden, value - o.value};
  }
  LexCost& operator+=(const LexCost& o) { return *this = *this + o; }
  LexCost& operator-=(const LexCost& o) { return *this = *this - o; }
  bool operator<(const LexCost& o) const {
    return forbidden != o.forbidden ? forbidden < o.forbidden : value < o.value;
  }
};

constexpr LexCost kUnreached{1L << 40, 0.0};

LexCost Entry(const Matrix& cost, Eigen::Index r, Eigen::Index c) {
  const double v = cost(r, c);
  if (std::isinf(v) && v > 0.0) return {1, 0.0};
  return {0, v};
}

// Shortest augmenting path with potentials; requires rows <= cols. Returns
// the column assigned to each row.
std::vector<int> SolveRowsLeCols(const Matrix& cost) {
  const auto n = cost.rows();
  const auto m = cost.cols();
  std::vector<LexCost> u(static_cast<std::size_t>(n + 1));
  std::vector<LexCost> v(static_cast<std::size_t>(m + 1));
  std::vector<Eigen::Index> p(static_cast<std::size_t>(m + 1), 0);
  std::vector<Eigen::Index> way(static_cast<std::size_t>(m + 1), 0);

  for (Eigen::Index i = 1; i <= n; ++i) {
    p[0] = i;
    Eigen::Index j0 = 0;
    std::vector<LexCost> minv(static_cast<std::size_t>(m + 1), kUnreached);
    std::vector<bool> used(static_cast<std::size_t>(m + 1), false);
    do {
      used[j0] = true;
      const Eigen::Index i0 = p[j0];
      LexCost delta = kUnreached;
      Eigen::Index j1 = 0;
      for (Eigen::Index j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const LexCost cur = Entry(cost, i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Eigen::Index j = 0; j <= m; ++j) {
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
      const Eigen::Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (Eigen::Index j = 1; j <= m; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

bool Finite(double v) { return !(std::isinf(v) && v > 0.0); }

}  // namespace

Assignment Hungarian(const Matrix& cost) {
  const auto rows = static_cast<int>(cost.rows());
  const auto cols = static_cast<int>(cost.cols());
  for (Eigen::Index r = 0; r < cost.rows(); ++r) {
    for (Eigen::Index c = 0; c < cost.cols(); ++c) {
      if (std::isnan(cost(r, c)) || cost(r, c) == kNegInf) {
        throw InputError("hungarian: costs must be finite or +inf");
      }
    }
  }

  std::vector<int> row_to_col(static_cast<std::size_t>(rows), -1);
  if (rows > 0 && cols > 0) {
    if (rows <= cols) {
      row_to_col = SolveRowsLeCols(cost);
    } else {
      const std::vector<int> col_to_row = SolveRowsLeCols(cost.transpose());
      for (int c = 0; c < cols; ++c) {
        if (col_to_row[c] >= 0) row_to_col[col_to_row[c]] = c;
      }
    }
  }

  Assignment out;
  std::vector<bool> col_used(static_cast<std::size_t>(cols), false);
  for (int r = 0; r < rows; ++r) {
    const int c = row_to_col[r];
    if (c >= 0 && Finite(cost(r, c))) {
      out.pairs.emplace_back(r, c);
      col_used[c] = true;
    } else {
      out.unmatched_rows.push_back(r);
    }
  }
  for (int c = 0; c < cols; ++c) {
    if (!col_used[c]) out.unmatched_cols.push_back(c);
  }
  return out;
}

Assignment GateAssignment(const Assignment& assignment, const Matrix& cost,
                          double gate) {
  Assignment out;
  out.unmatched_rows = assignment.unmatched_rows;
  out.unmatched_cols = assignment.unmatched_cols;
  for (const auto& [r, c] : assignment.pairs) {
    if (cost(r, c) < gate) {
      out.pairs.emplace_back(r, c);
    } else {
      out.unmatched_rows.push_back(r);
      out.unmatched_cols.push_back(c);
    }
  }
  std::sort(out.unmatched_rows.begin(), out.unmatched_rows.end());
  std::sort(out.unmatched_cols.begin(), out.unmatched_cols.end());
  return out;
}

double TotalCost(const Assignment& assignment, const Matrix& cost) {
  double total = 0.0;
  for (const auto& [r, c] : assignment.pairs) total += cost(r, c);
  return total;
}

}  // namespace tdam::assoc
