#pragma once

// Identity F1 on a frame window with a ground-plane distance gate.
//
// One global track-to-track assignment maximises the number of frames where
// the matched pair is within the threshold; that count is IDTP.

#include <cstddef>
#include <cstdint>

#include "trajeval/assignment.hpp"
#include "trajeval/core_types.hpp"

namespace trajeval {

struct IdCounts {
  std::uint64_t idtp = 0;
  std::uint64_t idfp = 0;
  std::uint64_t idfn = 0;

  IdCounts& operator+=(const IdCounts& o) {
    idtp += o.idtp;
    idfp += o.idfp;
    idfn += o.idfn;
    return *this;
  }
  bool operator==(const IdCounts&) const = default;

  /// Percentage in [0, 100]; 100 when there is nothing to identify.
  double score() const {
    const std::uint64_t denom = 2 * idtp + idfp + idfn;
    if (denom == 0) return 100.0;
    return 100.0 * static_cast<double>(2 * idtp) / static_cast<double>(denom);
  }
};

struct Idf1Result {
  double value = 100.0;
  IdCounts counts;
};

/// Frames in the window where both tracks exist within `threshold` meters.
inline std::size_t matched_frames(const Track& a, const Track& b, double threshold) {
  std::size_t hits = 0;
  auto ia = a.points().begin(), ib = b.points().begin();
  while (ia != a.points().end() && ib != b.points().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      if (distance(ia->second, ib->second) <= threshold) ++hits;
      ++ia;
      ++ib;
    }
  }
  return hits;
}

inline Idf1Result idf1(const TrackSet& preds, const TrackSet& gts, double threshold, const TimeRange& window) {
  if (!(threshold > 0.0)) throw Error("IDF1 threshold must be positive");
  const TrackSet p = restrict(preds, window);
  const TrackSet g = restrict(gts, window);

  Idf1Result out;
  if (!p.empty() && !g.empty()) {
    const double frames = static_cast<double>(window.size());
    CostMatrix cost(p.size(), g.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        cost(i, j) = frames - static_cast<double>(matched_frames(p.tracks()[i], g.tracks()[j], threshold));
      }
    }
    for (const auto& [i, j] : solve(cost).pairs) {
      out.counts.idtp += matched_frames(p.tracks()[i], g.tracks()[j], threshold);
    }
  }
  out.counts.idfp = p.state_count() - out.counts.idtp;
  out.counts.idfn = g.state_count() - out.counts.idtp;
  out.value = out.counts.score();
  return out;
}

}  // namespace trajeval
