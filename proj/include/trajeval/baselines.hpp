#pragma once

// Reference forecasters.

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

#include "trajeval/core_types.hpp"

namespace trajeval {

struct ForecastRequest {
  TrackSet observed;  // states at frames <= origin
  TimeIndex origin;
  std::int64_t horizon = 1;

  void validate() const {
    if (horizon < 1) throw Error("forecast horizon must be at least 1 frame");
    for (const auto& t : observed) {
      if (t.last_time() > origin) {
        throw Error("observed track '" + t.id() + "' has a state after the forecast origin");
      }
    }
  }
};

enum class ForecastModel { zero_velocity, constant_velocity };

namespace detail {

inline Track extrapolate(const Track& observed, TimeIndex origin, std::int64_t horizon, Point2 velocity) {
  const Point2 last = observed.points().rbegin()->second;
  const std::int64_t lead = origin - observed.last_time();
  std::vector<std::pair<TimeIndex, Point2>> states;
  states.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t k = 1; k <= horizon; ++k) {
    const double steps = static_cast<double>(lead + k);
    states.emplace_back(origin + k, Point2{last.x + velocity.x * steps, last.y + velocity.y * steps});
  }
  return Track(observed.id(), std::move(states));
}

}  // namespace detail

/// Repeats each track's last observed position over origin+1 .. origin+horizon.
inline TrackSet zero_velocity(const ForecastRequest& req) {
  req.validate();
  std::vector<Track> out;
  out.reserve(req.observed.size());
  for (const auto& t : req.observed) out.push_back(detail::extrapolate(t, req.origin, req.horizon, {0.0, 0.0}));
  return TrackSet(std::move(out), SetRole::prediction);
}

/// Linear extrapolation from the last two observed states, with the
/// per-frame displacement scaled by their frame gap. Single-state tracks
/// fall back to zero velocity.
inline TrackSet constant_velocity(const ForecastRequest& req) {
  req.validate();
  std::vector<Track> out;
  out.reserve(req.observed.size());
  for (const auto& t : req.observed) {
    Point2 vel{0.0, 0.0};
    if (t.size() >= 2) {
      auto last = t.points().rbegin();
      auto prev = std::next(last);
      const double gap = static_cast<double>(last->first - prev->first);
      vel = {(last->second.x - prev->second.x) / gap, (last->second.y - prev->second.y) / gap};
    }
    out.push_back(detail::extrapolate(t, req.origin, req.horizon, vel));
  }
  return TrackSet(std::move(out), SetRole::prediction);
}

/// Drops tracks with fewer than `min_obs` observed states, then runs `model`.
inline TrackSet forecast(const ForecastRequest& req, ForecastModel model, std::size_t min_obs = 1) {
  std::vector<Track> eligible;
  for (const auto& t : req.observed) {
    if (t.size() >= min_obs) eligible.push_back(t);
  }
  ForecastRequest filtered{TrackSet(std::move(eligible), req.observed.role()), req.origin, req.horizon};
  return model == ForecastModel::zero_velocity ? zero_velocity(filtered) : constant_velocity(filtered);
}

}  // namespace trajeval
