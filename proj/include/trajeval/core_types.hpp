#pragma once

// Trajectory data model shared by metrics, baselines, degradation and I/O.
//
// Positions live on the 2D ground plane in meters; time is a discrete frame
// index. Track identifiers are bookkeeping labels only and never take part in
// metric matching.

#include <algorithm>
#include <compare>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trajeval {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-negative frame index.
class TimeIndex {
 public:
  constexpr TimeIndex() = default;
  constexpr explicit TimeIndex(std::int64_t value) : value_(value) {
    if (value < 0) throw Error("TimeIndex must be non-negative, got " + std::to_string(value));
  }

  constexpr std::int64_t value() const { return value_; }

  constexpr auto operator<=>(const TimeIndex&) const = default;

  /// Offset by a signed number of frames; the result must stay non-negative.
  constexpr TimeIndex operator+(std::int64_t frames) const { return TimeIndex(value_ + frames); }
  constexpr TimeIndex operator-(std::int64_t frames) const { return TimeIndex(value_ - frames); }
  constexpr std::int64_t operator-(TimeIndex other) const { return value_ - other.value_; }

 private:
  std::int64_t value_ = 0;
};

/// Inclusive range of frames [first, last].
struct TimeRange {
  TimeIndex first;
  TimeIndex last;

  TimeRange() = default;
  TimeRange(TimeIndex f, TimeIndex l) : first(f), last(l) {
    if (l < f) throw Error("TimeRange is empty: last < first");
  }

  std::int64_t size() const { return last - first + 1; }
  bool contains(TimeIndex t) const { return first <= t && t <= last; }
  bool operator==(const TimeRange&) const = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
  bool operator==(const Point2&) const = default;
};

inline double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// One agent's positions keyed by frame. Immutable and never empty.
class Track {
 public:
  using Points = std::map<TimeIndex, Point2>;

  Track(std::string id, std::vector<std::pair<TimeIndex, Point2>> states) : id_(std::move(id)) {
    for (const auto& [t, p] : states) {
      if (!p.finite()) {
        throw Error("track '" + id_ + "': non-finite position at frame " + std::to_string(t.value()));
      }
      if (!points_.emplace(t, p).second) {
        throw Error("track '" + id_ + "': duplicate state at frame " + std::to_string(t.value()));
      }
    }
    if (points_.empty()) throw Error("track '" + id_ + "' has no states");
  }

  Track(std::string id, Points points) : Track(std::move(id), std::vector<std::pair<TimeIndex, Point2>>(points.begin(), points.end())) {}

  const std::string& id() const { return id_; }
  const Points& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  TimeIndex first_time() const { return points_.begin()->first; }
  TimeIndex last_time() const { return points_.rbegin()->first; }

  std::optional<Point2> at(TimeIndex t) const {
    auto it = points_.find(t);
    if (it == points_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const Track&) const = default;

 private:
  std::string id_;
  Points points_;
};

enum class SetRole { prediction, ground_truth };

/// Unordered collection of tracks with unique ids; may be empty.
///
/// Tracks are stored sorted by id so iteration order is canonical regardless
/// of construction order.
class TrackSet {
 public:
  TrackSet() = default;
  explicit TrackSet(std::vector<Track> tracks, SetRole role = SetRole::ground_truth)
      : tracks_(std::move(tracks)), role_(role) {
    std::sort(tracks_.begin(), tracks_.end(), [](const Track& a, const Track& b) { return a.id() < b.id(); });
    for (std::size_t i = 1; i < tracks_.size(); ++i) {
      if (tracks_[i].id() == tracks_[i - 1].id()) throw Error("duplicate track id '" + tracks_[i].id() + "'");
    }
  }

  const std::vector<Track>& tracks() const { return tracks_; }
  SetRole role() const { return role_; }
  std::size_t size() const { return tracks_.size(); }
  bool empty() const { return tracks_.empty(); }

  auto begin() const { return tracks_.begin(); }
  auto end() const { return tracks_.end(); }

  const Track* find(const std::string& id) const {
    auto it = std::lower_bound(tracks_.begin(), tracks_.end(), id,
                               [](const Track& t, const std::string& key) { return t.id() < key; });
    return (it != tracks_.end() && it->id() == id) ? &*it : nullptr;
  }

  /// Total number of states over all tracks.
  std::size_t state_count() const {
    std::size_t n = 0;
    for (const auto& t : tracks_) n += t.size();
    return n;
  }

  /// Smallest range covering every state; absent for an empty set.
  std::optional<TimeRange> extent() const {
    if (tracks_.empty()) return std::nullopt;
    TimeIndex lo = tracks_.front().first_time(), hi = tracks_.front().last_time();
    for (const auto& t : tracks_) {
      lo = std::min(lo, t.first_time());
      hi = std::max(hi, t.last_time());
    }
    return TimeRange(lo, hi);
  }

  bool operator==(const TrackSet& o) const { return tracks_ == o.tracks_; }

 private:
  std::vector<Track> tracks_;
  SetRole role_ = SetRole::ground_truth;
};

/// Forecast unit: observation window ending at the origin, future window after it.
struct Episode {
  std::string scene_id;
  TimeIndex origin;
  TimeRange obs_window;
  TimeRange future_window;

  Episode(std::string scene, TimeIndex t0, std::int64_t obs_frames, std::int64_t horizon_frames)
      : scene_id(std::move(scene)),
        origin(t0),
        obs_window(t0 - (obs_frames - 1), t0),
        future_window(t0 + 1, t0 + horizon_frames) {}
};

struct EvalConfig {
  double cutoff_c = 5.0;         // meters
  double ospa_order_p = 1.0;
  double idf1_threshold = 1.0;   // meters
  std::int64_t horizon_frames = 10;  // 5 s at the default frame period
  std::int64_t obs_frames = 2;
  std::int64_t stride_frames = 1;
  double frame_period = 0.5;     // seconds per frame; informational
  bool per_scene = false;        // average scene means instead of pooling episodes

  void validate() const {
    if (!(cutoff_c > 0.0) || !std::isfinite(cutoff_c)) throw Error("cutoff must be a positive finite number");
    if (!(ospa_order_p >= 1.0) || !std::isfinite(ospa_order_p)) throw Error("OSPA order p must be >= 1");
    if (!(idf1_threshold > 0.0) || !std::isfinite(idf1_threshold)) throw Error("IDF1 threshold must be positive");
    if (horizon_frames < 1) throw Error("horizon must be at least 1 frame");
    if (obs_frames < 2) throw Error("observation window must be at least 2 frames");
    if (stride_frames < 1) throw Error("stride must be at least 1 frame");
    if (!(frame_period > 0.0)) throw Error("frame period must be positive");
  }
};

/// Points of `track` inside `window`, or nothing when none fall inside.
inline std::optional<Track> restrict(const Track& track, const TimeRange& window) {
  Track::Points kept(track.points().lower_bound(window.first), track.points().upper_bound(window.last));
  if (kept.empty()) return std::nullopt;
  return Track(track.id(), std::move(kept));
}

/// Restricts every track, dropping those with no state in the window.
inline TrackSet restrict(const TrackSet& set, const TimeRange& window) {
  std::vector<Track> kept;
  for (const auto& t : set) {
    if (auto r = restrict(t, window)) kept.push_back(std::move(*r));
  }
  return TrackSet(std::move(kept), set.role());
}

/// Sorted union of both tracks' frame domains.
inline std::vector<TimeIndex> domain_union(const Track& a, const Track& b) {
  std::vector<TimeIndex> out;
  out.reserve(a.size() + b.size());
  auto ia = a.points().begin(), ib = b.points().begin();
  while (ia != a.points().end() || ib != b.points().end()) {
    if (ib == b.points().end() || (ia != a.points().end() && ia->first < ib->first)) {
      out.push_back((ia++)->first);
    } else if (ia == a.points().end() || ib->first < ia->first) {
      out.push_back((ib++)->first);
    } else {
      out.push_back(ia->first);
      ++ia;
      ++ib;
    }
  }
  return out;
}

}  // namespace trajeval
