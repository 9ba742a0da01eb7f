#pragma once

// End-to-end Forecasting Error.
//
// Predicted and ground-truth tracks are compared without identities: every
// (prediction, ground truth) pair gets a time-averaged cutoff distance over
// the union of their frame domains, an optimal one-to-one matching picks the
// pairs, and each unmatched track on the larger side costs the cutoff c. The
// total is normalised by the larger set size so the value lies in [0, c].
//
// The per-frame distance is asymmetric. A missing prediction where ground
// truth exists costs c; a prediction where ground truth is absent costs 0, so
// forecasts that run past the ground truth are not penalised.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trajeval/assignment.hpp"
#include "trajeval/core_types.hpp"

namespace trajeval {

struct EfeResult {
  double value = 0.0;  // meters, in [0, c]
  std::vector<std::pair<std::string, std::string>> matched;  // (pred_id, gt_id)
  std::size_t cardinality_gap = 0;
  double localization_term = 0.0;
  double cardinality_term = 0.0;
};

inline double d_singleton(const std::optional<Point2>& pred_state, const std::optional<Point2>& gt_state, double c) {
  if (pred_state && gt_state) return std::min(c, distance(*pred_state, *gt_state));
  if (!pred_state && gt_state) return c;
  return 0.0;
}

/// Mean of d_singleton over the union of both frame domains.
inline double track_distance(const Track& pred, const Track& gt, double c) {
  const auto& pp = pred.points();
  const auto& gp = gt.points();
  auto ip = pp.begin(), ig = gp.begin();
  double sum = 0.0;
  std::size_t steps = 0;
  while (ip != pp.end() || ig != gp.end()) {
    ++steps;
    if (ig == gp.end() || (ip != pp.end() && ip->first < ig->first)) {
      ++ip;  // prediction only: free
    } else if (ip == pp.end() || ig->first < ip->first) {
      sum += c;
      ++ig;
    } else {
      sum += std::min(c, distance(ip->second, ig->second));
      ++ip;
      ++ig;
    }
  }
  return sum / static_cast<double>(steps);
}

inline CostMatrix efe_cost_matrix(const TrackSet& preds, const TrackSet& gts, double c) {
  CostMatrix cost(preds.size(), gts.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = 0; j < gts.size(); ++j) {
      cost(i, j) = track_distance(preds.tracks()[i], gts.tracks()[j], c);
    }
  }
  return cost;
}

inline EfeResult efe(const TrackSet& preds, const TrackSet& gts, double c = 5.0) {
  if (!(c > 0.0)) throw Error("EFE cutoff must be positive");
  const std::size_t m = preds.size(), n = gts.size();
  EfeResult out;
  out.cardinality_gap = m > n ? m - n : n - m;
  if (m == 0 && n == 0) return out;
  if (m == 0 || n == 0) {
    out.cardinality_term = c;
    out.value = c;
    return out;
  }

  const Assignment assignment = solve(efe_cost_matrix(preds, gts, c));
  const double norm = static_cast<double>(std::max(m, n));
  out.localization_term = assignment.total_cost / norm;
  out.cardinality_term = c * static_cast<double>(out.cardinality_gap) / norm;
  out.value = out.localization_term + out.cardinality_term;
  out.matched.reserve(assignment.pairs.size());
  for (const auto& [i, j] : assignment.pairs) {
    out.matched.emplace_back(preds.tracks()[i].id(), gts.tracks()[j].id());
  }
  return out;
}

}  // namespace trajeval
