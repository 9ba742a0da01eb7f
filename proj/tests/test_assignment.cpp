#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <set>

#include "test_support.hpp"
#include "trajeval/assignment.hpp"

using namespace trajeval;
using trajeval::testing::brute_force_assignment;

namespace {

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

std::vector<std::vector<double>> to_rows(const CostMatrix& m) {
  std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

CostMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, bool integer) {
  CostMatrix m(rows, cols);
  std::uniform_real_distribution<double> real(0.0, 10.0);
  std::uniform_int_distribution<int> small(0, 3);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = integer ? small(rng) : real(rng);
  return m;
}

void expect_valid(const Assignment& a, const CostMatrix& m) {
  EXPECT_EQ(a.pairs.size(), std::min(m.rows(), m.cols()));
  std::set<std::size_t> rows, cols;
  double total = 0.0;
  for (auto [r, c] : a.pairs) {
    EXPECT_TRUE(rows.insert(r).second);
    EXPECT_TRUE(cols.insert(c).second);
    total += m(r, c);
  }
  EXPECT_EQ(total, a.total_cost);
}

}  // namespace

TEST(Assignment, TwoByTwo) {
  const auto a = solve(CostMatrix{{1, 2}, {3, 0}});
  EXPECT_EQ(a.pairs, (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(a.total_cost, 1.0);
}

TEST(Assignment, ZeroDiagonal) {
  const auto a = solve(CostMatrix{{0, 5}, {5, 0}});
  EXPECT_EQ(a.pairs, (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(a.total_cost, 0.0);
}

TEST(Assignment, SingleRowPicksMinimum) {
  const auto a = solve(CostMatrix{{4, 2, 9}});
  EXPECT_EQ(a.pairs, (Pairs{{0, 1}}));
  EXPECT_EQ(a.total_cost, 2.0);
}

TEST(Assignment, TallMatrix) {
  const auto a = solve(CostMatrix{{4}, {2}, {9}});
  EXPECT_EQ(a.pairs, (Pairs{{1, 0}}));
  EXPECT_EQ(a.total_cost, 2.0);
}

TEST(Assignment, EmptyDimensions) {
  EXPECT_TRUE(solve(CostMatrix(0, 4)).pairs.empty());
  EXPECT_TRUE(solve(CostMatrix(3, 0)).pairs.empty());
  EXPECT_EQ(solve(CostMatrix()).total_cost, 0.0);
}

TEST(Assignment, RejectsNonFinite) {
  CostMatrix m(2, 2, 1.0);
  m(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(solve(m), Error);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solve(m), Error);
  m(1, 0) = -1.0;
  EXPECT_THROW(solve(m), Error);
}

TEST(Assignment, TieBreakIsLexicographic) {
  // All-equal matrices: identity pairing on the leading rows/cols.
  EXPECT_EQ(solve(CostMatrix(3, 3, 1.0)).pairs, (Pairs{{0, 0}, {1, 1}, {2, 2}}));
  EXPECT_EQ(solve(CostMatrix(2, 4, 0.0)).pairs, (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(solve(CostMatrix(4, 2, 0.0)).pairs, (Pairs{{0, 0}, {1, 1}}));
  // Two optima of cost 2: {(0,1),(1,0)} and {(0,0),(1,1)}; the latter is smaller.
  EXPECT_EQ(solve(CostMatrix{{1, 1}, {1, 1}}).pairs, (Pairs{{0, 0}, {1, 1}}));
  EXPECT_EQ(solve(CostMatrix{{2, 0, 0}, {0, 0, 2}}).pairs, (Pairs{{0, 1}, {1, 0}}));
}

TEST(Assignment, TieBreakMatchesBruteForceLexicographicOptimum) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (int iter = 0; iter < 300; ++iter) {
    const auto m = random_matrix(rng, dim(rng), dim(rng), true);
    // Enumerate every assignment of size min(m, n), keep the lexicographically
    // smallest row-sorted pair list among the cheapest.
    const std::size_t rows = m.rows(), cols = m.cols(), k = std::min(rows, cols);
    double best = std::numeric_limits<double>::infinity();
    Pairs best_pairs;
    Pairs cur;
    std::vector<char> used_c(cols, 0);
    auto rec = [&](auto&& self, std::size_t r, double sum) -> void {
      if (cur.size() == k) {
        if (sum < best || (sum == best && cur < best_pairs)) {
          best = sum;
          best_pairs = cur;
        }
        return;
      }
      if (r == rows) return;
      for (std::size_t c = 0; c < cols; ++c) {
        if (used_c[c]) continue;
        used_c[c] = 1;
        cur.emplace_back(r, c);
        self(self, r + 1, sum + m(r, c));
        cur.pop_back();
        used_c[c] = 0;
      }
      if (rows - r - 1 >= k - cur.size()) self(self, r + 1, sum);  // leave row r unmatched
    };
    rec(rec, 0, 0.0);
    const auto a = solve(m);
    EXPECT_EQ(a.total_cost, best);
    EXPECT_EQ(a.pairs, best_pairs);
  }
}

TEST(Assignment, MatchesBruteForceOnRandomMatrices) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> dim(0, 8);
  for (int iter = 0; iter < 400; ++iter) {
    std::size_t r = dim(rng), c = dim(rng);
    if (std::min(r, c) > 7) r = 7;
    const auto m = random_matrix(rng, r, c, iter % 3 == 0);
    const auto a = solve(m);
    expect_valid(a, m);
    EXPECT_EQ(a.total_cost, brute_force_assignment(to_rows(m))) << r << "x" << c;
  }
}

TEST(Assignment, RowPermutationInvariance) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 100; ++iter) {
    const auto m = random_matrix(rng, 6, 8, false);
    std::vector<std::size_t> perm(m.rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CostMatrix p(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) p(r, c) = m(perm[r], c);
    EXPECT_NEAR(solve(m).total_cost, solve(p).total_cost, 1e-9);
  }
}

TEST(Assignment, ConstantShiftAddsRowsTimesK) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> dim(1, 9);
  for (int iter = 0; iter < 100; ++iter) {
    std::size_t r = dim(rng), c = dim(rng);
    if (r > c) std::swap(r, c);
    const auto m = random_matrix(rng, r, c, false);
    const double k = 3.25;
    CostMatrix shifted = m;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) shifted(i, j) += k;
    EXPECT_NEAR(solve(shifted).total_cost, solve(m).total_cost + static_cast<double>(r) * k, 1e-9);
  }
}

TEST(Assignment, LargeMatrixRunsQuickly) {
  std::mt19937_64 rng(8);
  const auto m = random_matrix(rng, 150, 200, false);
  const auto a = solve(m);
  expect_valid(a, m);
}

TEST(Assignment, TieBreakShiftsLongAlternatingChains) {
  const CostMatrix m{{1, 1, 1, 2}, {0, 1, 2, 0}, {1, 2, 0, 1}};
  const auto a = solve(m);
  EXPECT_EQ(a.total_cost, 1.0);
  EXPECT_EQ(a.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 3}, {2, 2}}));
}
