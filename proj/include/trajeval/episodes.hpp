#pragma once

// Episode slicing, per-episode metric evaluation and aggregation.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "trajeval/core_types.hpp"
#include "trajeval/metric_efe.hpp"
#include "trajeval/metric_idf1.hpp"
#include "trajeval/metric_ospa2.hpp"

namespace trajeval {

struct SceneData {
  std::string scene_id;
  TrackSet tracks;
};

struct MetricSelection {
  bool efe = true;
  bool ospa2 = true;
  bool idf1 = true;
};

struct EpisodeRow {
  std::string scene_id;
  TimeIndex origin;
  double efe = 0.0;
  double ospa2 = 0.0;
  double idf1 = 0.0;
  IdCounts counts;
  std::size_t cardinality_gap = 0;
};

struct Aggregate {
  std::size_t episode_count = 0;
  std::optional<double> efe;    // absent when there are no episodes
  std::optional<double> ospa2;
  std::optional<double> idf1;   // pooled from summed counts
  IdCounts counts;
};

struct MetricReport {
  EvalConfig config;
  MetricSelection metrics;
  std::vector<EpisodeRow> per_episode;  // sorted by (scene_id, origin)
  Aggregate aggregate;
};

/// Key for one prediction set: (scene_id, origin frame).
using EpisodeKey = std::pair<std::string, std::int64_t>;
using PredictionSets = std::map<EpisodeKey, TrackSet>;

/// Origins stepped by the stride from the first admissible frame, such that
/// both windows lie inside the scene's time extent.
inline std::vector<Episode> enumerate_episodes(const SceneData& scene, const EvalConfig& cfg) {
  cfg.validate();
  std::vector<Episode> out;
  const auto extent = scene.tracks.extent();
  if (!extent) return out;
  const std::int64_t first_origin = extent->first.value() + cfg.obs_frames - 1;
  const std::int64_t last_origin = extent->last.value() - cfg.horizon_frames;
  for (std::int64_t t0 = first_origin; t0 <= last_origin; t0 += cfg.stride_frames) {
    out.emplace_back(scene.scene_id, TimeIndex(t0), cfg.obs_frames, cfg.horizon_frames);
  }
  return out;
}

/// Metrics for one episode. Both sets are restricted to the future window.
inline EpisodeRow evaluate_episode(const Episode& ep, const TrackSet& preds, const TrackSet& gt_scene,
                                   const EvalConfig& cfg, const MetricSelection& metrics = {}) {
  const TrackSet gt_future = restrict(gt_scene, ep.future_window);
  const TrackSet pred_future = restrict(preds, ep.future_window);
  EpisodeRow row;
  row.scene_id = ep.scene_id;
  row.origin = ep.origin;
  row.cardinality_gap = pred_future.size() > gt_future.size() ? pred_future.size() - gt_future.size()
                                                              : gt_future.size() - pred_future.size();
  if (metrics.efe) row.efe = efe(pred_future, gt_future, cfg.cutoff_c).value;
  if (metrics.ospa2) row.ospa2 = ospa2(pred_future, gt_future, {cfg.cutoff_c, cfg.ospa_order_p, ep.future_window});
  if (metrics.idf1) {
    const auto r = idf1(pred_future, gt_future, cfg.idf1_threshold, ep.future_window);
    row.idf1 = r.value;
    row.counts = r.counts;
  }
  return row;
}

inline Aggregate aggregate_rows(const std::vector<EpisodeRow>& rows, const EvalConfig& cfg,
                                const MetricSelection& metrics) {
  Aggregate agg;
  agg.episode_count = rows.size();
  for (const auto& r : rows) agg.counts += r.counts;
  if (rows.empty()) return agg;

  double efe_sum = 0.0, ospa_sum = 0.0;
  if (!cfg.per_scene) {
    for (const auto& r : rows) {
      efe_sum += r.efe;
      ospa_sum += r.ospa2;
    }
    efe_sum /= static_cast<double>(rows.size());
    ospa_sum /= static_cast<double>(rows.size());
  } else {
    // Rows are sorted by scene, so scenes are contiguous runs.
    std::size_t scenes = 0;
    for (std::size_t i = 0; i < rows.size();) {
      std::size_t j = i;
      double e = 0.0, o = 0.0;
      for (; j < rows.size() && rows[j].scene_id == rows[i].scene_id; ++j) {
        e += rows[j].efe;
        o += rows[j].ospa2;
      }
      efe_sum += e / static_cast<double>(j - i);
      ospa_sum += o / static_cast<double>(j - i);
      ++scenes;
      i = j;
    }
    efe_sum /= static_cast<double>(scenes);
    ospa_sum /= static_cast<double>(scenes);
  }
  if (metrics.efe) agg.efe = efe_sum;
  if (metrics.ospa2) agg.ospa2 = ospa_sum;
  if (metrics.idf1) agg.idf1 = agg.counts.score();
  return agg;
}

/// Evaluates every episode of every ground-truth scene.
///
/// A missing prediction set is the empty set. Predictions for an unknown
/// scene or an origin that is not an episode of that scene are rejected.
/// Episodes fan out over `jobs` threads; the report does not depend on it.
inline MetricReport evaluate(const PredictionSets& preds, const std::map<std::string, SceneData>& gt_scenes,
                             const EvalConfig& cfg, const MetricSelection& metrics = {}, unsigned jobs = 1) {
  cfg.validate();

  std::vector<Episode> episodes;
  std::vector<const SceneData*> episode_scene;
  std::set<EpisodeKey> valid_keys;
  for (const auto& [id, scene] : gt_scenes) {
    for (auto& ep : enumerate_episodes(scene, cfg)) {
      valid_keys.emplace(ep.scene_id, ep.origin.value());
      episodes.push_back(std::move(ep));
      episode_scene.push_back(&scene);
    }
  }

  for (const auto& [key, set] : preds) {
    const auto scene = gt_scenes.find(key.first);
    if (scene == gt_scenes.end()) throw Error("predictions reference unknown scene '" + key.first + "'");
    if (!valid_keys.contains(key)) {
      throw Error("predictions for scene '" + key.first + "' use origin " + std::to_string(key.second) +
                  ", which is not an episode origin");
    }
  }

  const TrackSet empty;
  std::vector<EpisodeRow> rows(episodes.size());
  auto run_one = [&](std::size_t i) {
    const auto it = preds.find({episodes[i].scene_id, episodes[i].origin.value()});
    const TrackSet& p = it == preds.end() ? empty : it->second;
    rows[i] = evaluate_episode(episodes[i], p, episode_scene[i]->tracks, cfg, metrics);
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, episodes.size()))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < episodes.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < episodes.size() && !failed; i = next++) {
          try {
            run_one(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::sort(rows.begin(), rows.end(), [](const EpisodeRow& a, const EpisodeRow& b) {
    return std::tie(a.scene_id, a.origin) < std::tie(b.scene_id, b.origin);
  });

  MetricReport report;
  report.config = cfg;
  report.metrics = metrics;
  report.aggregate = aggregate_rows(rows, cfg, metrics);
  report.per_episode = std::move(rows);
  return report;
}

}  // namespace trajeval
