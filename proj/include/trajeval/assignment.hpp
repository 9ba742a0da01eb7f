#pragma once

// Rectangular min-cost linear assignment.
//
// The solver pads the matrix to square with zero-cost dummy rows or columns,
// runs the O(k^3) shortest augmenting path Hungarian method, and then walks
// the tight-edge subgraph of the optimal dual to pick the lexicographically
// smallest optimal pairing. Padding never leaks to callers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "trajeval/core_types.hpp"

namespace trajeval {

/// Dense row-major matrix of non-negative finite costs.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  CostMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error("CostMatrix rows must have equal length");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  /// Throws unless every entry is finite and non-negative.
  void validate() const {
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        double v = (*this)(r, c);
        if (!std::isfinite(v)) {
          throw Error("cost matrix entry (" + std::to_string(r) + ", " + std::to_string(c) + ") is not finite");
        }
        if (v < 0.0) {
          throw Error("cost matrix entry (" + std::to_string(r) + ", " + std::to_string(c) + ") is negative");
        }
      }
    }
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // sorted by row
  double total_cost = 0.0;
};

namespace detail {

// Shortest augmenting path on a square k x k matrix. Returns row -> column
// and fills the dual potentials (u for rows, v for columns) so that
// cost(i, j) - u[i] - v[j] >= 0 with equality on the matched edges.
inline std::vector<std::size_t> hungarian_square(const std::vector<double>& cost, std::size_t k,
                                                 std::vector<double>& u, std::vector<double>& v) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based internal indexing; index 0 is the virtual root column.
  std::vector<double> pu(k + 1, 0.0), pv(k + 1, 0.0);
  std::vector<std::size_t> owner(k + 1, 0), way(k + 1, 0);
  std::vector<double> minv(k + 1);
  std::vector<char> used(k + 1);

  for (std::size_t i = 1; i <= k; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * k + (j - 1)] - pu[i0] - pv[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          pu[owner[j]] += delta;
          pv[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(k);
  for (std::size_t j = 1; j <= k; ++j) row_to_col[owner[j] - 1] = j - 1;
  u.assign(pu.begin() + 1, pu.end());
  v.assign(pv.begin() + 1, pv.end());
  return row_to_col;
}

// Rewrites an optimal perfect matching into the lexicographically smallest
// one that uses only tight edges. Rows are fixed in order; for each row the
// smallest tight column that can be freed by an alternating cycle through
// the not-yet-fixed rows is chosen. O(k^3) overall.
inline void lexicographic_tight_matching(std::vector<std::size_t>& row_to_col, const std::vector<char>& tight,
                                         std::size_t k) {
  std::vector<std::size_t> col_to_row(k);
  for (std::size_t r = 0; r < k; ++r) col_to_row[row_to_col[r]] = r;

  std::vector<char> reach(k);
  std::vector<std::size_t> parent(k);  // column whose owner moves into this column's chain
  std::vector<std::size_t> queue;
  queue.reserve(k);

  for (std::size_t r = 0; r < k; ++r) {
    const std::size_t freed = row_to_col[r];
    // reach[c]: column c can be vacated by shifting owners along tight
    // edges until `freed` is taken. parent[c] is the next column on that path.
    std::fill(reach.begin(), reach.end(), 0);
    queue.clear();
    reach[freed] = 1;
    parent[freed] = freed;
    queue.push_back(freed);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t d = queue[head];
      for (std::size_t q = r + 1; q < k; ++q) {
        const std::size_t c = row_to_col[q];
        if (reach[c] || !tight[q * k + d]) continue;
        reach[c] = 1;
        parent[c] = d;
        queue.push_back(c);
      }
    }
    std::size_t best = freed;
    for (std::size_t c = 0; c < freed; ++c) {
      if (reach[c] && tight[r * k + c]) {
        best = c;
        break;
      }
    }
    if (best == freed) continue;
    // Shift owners along the chain best -> ... -> freed, then give best to r.
    std::vector<std::size_t> chain;
    for (std::size_t c = best; c != freed; c = parent[c]) chain.push_back(c);
    std::vector<std::size_t> owners;
    for (const std::size_t c : chain) owners.push_back(col_to_row[c]);
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const std::size_t next = parent[chain[i]];
      row_to_col[owners[i]] = next;
      col_to_row[next] = owners[i];
    }
    row_to_col[r] = best;
    col_to_row[best] = r;
  }
}

}  // namespace detail

/// Globally optimal assignment of size min(rows, cols).
///
/// Among equal-cost optima the pairing whose row-sorted pair list is
/// lexicographically smallest is returned.
inline Assignment solve(const CostMatrix& cost) {
  cost.validate();
  const std::size_t m = cost.rows(), n = cost.cols();
  Assignment out;
  if (m == 0 || n == 0) return out;

  const std::size_t k = std::max(m, n);
  double scale = 0.0;
  std::vector<double> square(k * k, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      square[r * k + c] = cost(r, c);
      scale = std::max(scale, cost(r, c));
    }
  }

  std::vector<double> u, v;
  auto row_to_col = detail::hungarian_square(square, k, u, v);

  const double eps = 1e-10 * std::max(1.0, scale) * static_cast<double>(k);
  std::vector<char> tight(k * k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      tight[r * k + c] = std::abs(square[r * k + c] - u[r] - v[c]) <= eps;
    }
  }
  // Matched edges are tight by construction; keep them so even if rounding disagrees.
  for (std::size_t r = 0; r < k; ++r) tight[r * k + row_to_col[r]] = 1;
  detail::lexicographic_tight_matching(row_to_col, tight, k);

  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t c = row_to_col[r];
    if (c < n) {
      out.pairs.emplace_back(r, c);
      out.total_cost += cost(r, c);
    }
  }
  return out;
}

}  // namespace trajeval
