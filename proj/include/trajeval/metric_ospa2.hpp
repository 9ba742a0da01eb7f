#pragma once

// OSPA-2 distance between two trajectory sets over a fixed frame window.
//
// The base distance between two tracks is the per-frame singleton OSPA
// (cutoff distance when both exist, c when exactly one exists, 0 when
// neither does) averaged over the whole window. Unlike EFE it is symmetric
// and divides by the window length rather than the domain union.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "trajeval/assignment.hpp"
#include "trajeval/core_types.hpp"

namespace trajeval {

struct Ospa2Params {
  double cutoff_c = 5.0;
  double order_p = 1.0;
  TimeRange window;

  void validate() const {
    if (!(cutoff_c > 0.0) || !std::isfinite(cutoff_c)) throw Error("OSPA-2 cutoff must be positive");
    if (!(order_p >= 1.0) || !std::isfinite(order_p)) throw Error("OSPA-2 order p must be >= 1");
  }
};

inline double ospa_base(const Track& a, const Track& b, const Ospa2Params& params) {
  const double c = params.cutoff_c;
  double sum = 0.0;
  for (TimeIndex t = params.window.first; t <= params.window.last; t = t + 1) {
    const auto pa = a.at(t), pb = b.at(t);
    if (pa && pb) {
      sum += std::min(c, distance(*pa, *pb));
    } else if (pa || pb) {
      sum += c;
    }
  }
  return sum / static_cast<double>(params.window.size());
}

/// Tracks are restricted to the window first; tracks with no state inside it
/// do not count towards either cardinality.
inline double ospa2(const TrackSet& preds, const TrackSet& gts, const Ospa2Params& params) {
  params.validate();
  const TrackSet a_all = restrict(preds, params.window);
  const TrackSet b_all = restrict(gts, params.window);
  const bool swap = a_all.size() > b_all.size();
  const TrackSet& small = swap ? b_all : a_all;
  const TrackSet& large = swap ? a_all : b_all;
  const std::size_t m = small.size(), n = large.size();
  if (n == 0) return 0.0;
  if (m == 0) return params.cutoff_c;

  const double p = params.order_p;
  CostMatrix cost(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cost(i, j) = std::pow(ospa_base(small.tracks()[i], large.tracks()[j], params), p);
    }
  }
  const Assignment assignment = solve(cost);

  // Sum in sorted order so both argument orders round identically.
  std::vector<double> terms;
  terms.reserve(assignment.pairs.size());
  for (const auto& [i, j] : assignment.pairs) terms.push_back(cost(i, j));
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  total += std::pow(params.cutoff_c, p) * static_cast<double>(n - m);
  return std::pow(total / static_cast<double>(n), 1.0 / p);
}

}  // namespace trajeval
