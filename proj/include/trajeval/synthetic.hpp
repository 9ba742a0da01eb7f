#pragma once

// Deterministic synthetic ground-truth scenes for tests and demos.
//
// Positions and per-frame velocities are multiples of 1/64 m, so every state
// is exact in binary floating point and in the 6-decimal track-file format;
// constant-velocity extrapolation of a `linear` scene reproduces it exactly.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "trajeval/core_types.hpp"
#include "trajeval/degrade.hpp"

namespace trajeval {

enum class Scenario { static_agents, linear, crossing };

inline Scenario parse_scenario(const std::string& name) {
  if (name == "static") return Scenario::static_agents;
  if (name == "linear") return Scenario::linear;
  if (name == "crossing") return Scenario::crossing;
  throw Error("unknown scenario '" + name + "' (expected static, linear or crossing)");
}

namespace detail {
inline double quantize(double v) { return std::round(v * 64.0) / 64.0; }
}  // namespace detail

/// `agents` tracks over frames 0 .. frames-1.
inline TrackSet generate_scene(Scenario scenario, std::size_t agents, std::int64_t frames, std::uint64_t seed) {
  if (frames < 1) throw Error("scene needs at least one frame");
  DegradeRng rng(seed);
  std::vector<Track> tracks;
  for (std::size_t a = 0; a < agents; ++a) {
    Point2 start, vel;
    switch (scenario) {
      case Scenario::static_agents:
        start = {detail::quantize(-10.0 + 20.0 * rng.uniform()), detail::quantize(-10.0 + 20.0 * rng.uniform())};
        break;
      case Scenario::linear: {
        start = {detail::quantize(-10.0 + 20.0 * rng.uniform()), detail::quantize(-10.0 + 20.0 * rng.uniform())};
        const double speed = 0.25 + 0.25 * rng.uniform();
        const double heading = 2.0 * std::numbers::pi * rng.uniform();
        vel = {detail::quantize(speed * std::cos(heading)), detail::quantize(speed * std::sin(heading))};
        break;
      }
      case Scenario::crossing: {
        // Walk from a point on a 10 m circle straight through the centre.
        const double angle = 2.0 * std::numbers::pi * (static_cast<double>(a) + 0.5 * rng.uniform()) /
                             static_cast<double>(agents);
        start = {detail::quantize(10.0 * std::cos(angle)), detail::quantize(10.0 * std::sin(angle))};
        const double span = static_cast<double>(std::max<std::int64_t>(frames - 1, 1));
        vel = {detail::quantize(-2.0 * start.x / span), detail::quantize(-2.0 * start.y / span)};
        break;
      }
    }
    std::vector<std::pair<TimeIndex, Point2>> states;
    for (std::int64_t t = 0; t < frames; ++t) {
      const double k = static_cast<double>(t);
      states.emplace_back(TimeIndex(t), Point2{start.x + vel.x * k, start.y + vel.y * k});
    }
    char id[32];
    std::snprintf(id, sizeof id, "agent%03zu", a);
    tracks.emplace_back(id, std::move(states));
  }
  return TrackSet(std::move(tracks));
}

}  // namespace trajeval
