#pragma once

// Synthetic tracker degradation: missed states, position noise, identity
// splits and false tracks applied to a clean track set.
//
// Random stream: std::mt19937_64 seeded with `seed` (bit-exact across
// standard libraries). Uniforms are (next() >> 11) * 2^-53 in [0, 1);
// normals use one Box-Muller draw z = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)
// per variate. Draws happen in a fixed order and a fixed amount regardless
// of the rates, so runs with the same seed share their random numbers:
//
//   1. per clean track (id order): u_split, u_where. The track splits when
//      u_split < id_switch_rate and it has >= 2 states; the tail starting at
//      state 1 + floor(u_where * (size - 1)) gets a fresh id.
//   2. per resulting track, per state (frame order): u_miss, z_x, z_y. The
//      state is deleted when u_miss < miss_rate, otherwise shifted by
//      noise_sigma * (z_x, z_y). Tracks left without states are dropped.
//   3. per block of false_track_max_len frames over the clean time extent:
//      u_spawn, u_start, u_len, u_x, u_y, then z_x, z_y per emitted state.
//      A static false track spawns when u_spawn < fp_rate, with lifespan
//      uniform in [2, false_track_max_len] frames, start uniform in the block
//      (pulled back so the track ends inside the extent, clipped only when
//      the extent itself is shorter) and position uniform in the clean
//      bounding box plus noise.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trajeval/core_types.hpp"

namespace trajeval {

struct DegradeParams {
  double miss_rate = 0.0;
  double fp_rate = 0.0;          // expected false tracks per false_track_max_len frames
  double id_switch_rate = 0.0;
  double noise_sigma = 0.0;      // meters
  std::uint64_t seed = 0;
  std::int64_t false_track_max_len = 10;  // frames; typically the forecast horizon

  void validate() const {
    auto rate = [](double r, const char* name) {
      if (!(r >= 0.0 && r <= 1.0)) throw Error(std::string(name) + " must lie in [0, 1]");
    };
    rate(miss_rate, "miss rate");
    rate(fp_rate, "false-track rate");
    rate(id_switch_rate, "id-switch rate");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw Error("noise sigma must be >= 0");
    if (false_track_max_len < 2) throw Error("false-track lifespan bound must be at least 2 frames");
  }
};

/// The documented random stream used by `degrade`.
class DegradeRng {
 public:
  explicit DegradeRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline TrackSet degrade(const TrackSet& clean, const DegradeParams& params) {
  params.validate();
  DegradeRng rng(params.seed);

  std::set<std::string> used_ids;
  for (const auto& t : clean) used_ids.insert(t.id());
  auto fresh_id = [&](const std::string& stem) {
    for (std::uint64_t n = 1;; ++n) {
      std::string id = stem + std::to_string(n);
      if (used_ids.insert(id).second) return id;
    }
  };

  using States = std::vector<std::pair<TimeIndex, Point2>>;
  std::vector<std::pair<std::string, States>> pieces;
  for (const auto& t : clean) {
    const double u_split = rng.uniform();
    const double u_where = rng.uniform();
    States states(t.points().begin(), t.points().end());
    if (u_split < params.id_switch_rate && states.size() >= 2) {
      const auto cut = 1 + static_cast<std::size_t>(u_where * static_cast<double>(states.size() - 1));
      States tail(states.begin() + static_cast<std::ptrdiff_t>(cut), states.end());
      states.resize(cut);
      pieces.emplace_back(t.id(), std::move(states));
      pieces.emplace_back(fresh_id(t.id() + "#"), std::move(tail));
    } else {
      pieces.emplace_back(t.id(), std::move(states));
    }
  }

  std::vector<Track> out;
  for (auto& [id, states] : pieces) {
    States kept;
    for (const auto& [time, p] : states) {
      const double u_miss = rng.uniform();
      const double zx = rng.normal();
      const double zy = rng.normal();
      if (u_miss < params.miss_rate) continue;
      kept.emplace_back(time, Point2{p.x + params.noise_sigma * zx, p.y + params.noise_sigma * zy});
    }
    if (!kept.empty()) out.emplace_back(id, std::move(kept));
  }

  if (const auto extent = clean.extent()) {
    double x0 = clean.tracks().front().points().begin()->second.x, x1 = x0;
    double y0 = clean.tracks().front().points().begin()->second.y, y1 = y0;
    for (const auto& t : clean) {
      for (const auto& [time, p] : t.points()) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
      }
    }
    const std::int64_t block = params.false_track_max_len;
    for (std::int64_t b = extent->first.value(); b <= extent->last.value(); b += block) {
      const double u_spawn = rng.uniform();
      const double u_start = rng.uniform();
      const double u_len = rng.uniform();
      const double u_x = rng.uniform();
      const double u_y = rng.uniform();
      if (!(u_spawn < params.fp_rate)) continue;
      const std::int64_t len = 2 + static_cast<std::int64_t>(u_len * static_cast<double>(block - 1));
      std::int64_t start = b + static_cast<std::int64_t>(u_start * static_cast<double>(block));
      start = std::max(std::min(start, extent->last.value() - len + 1), extent->first.value());
      const std::int64_t end = std::min(start + len - 1, extent->last.value());
      const Point2 anchor{x0 + u_x * (x1 - x0), y0 + u_y * (y1 - y0)};
      States states;
      for (std::int64_t t = start; t <= end; ++t) {
        const double zx = rng.normal();
        const double zy = rng.normal();
        states.emplace_back(TimeIndex(t), Point2{anchor.x + params.noise_sigma * zx, anchor.y + params.noise_sigma * zy});
      }
      out.emplace_back(fresh_id("fp"), std::move(states));
    }
  }

  return TrackSet(std::move(out), clean.role());
}

}  // namespace trajeval
