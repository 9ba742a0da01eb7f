#pragma once

// File formats.
//
// Track file: UTF-8 text, one state per line as `frame,track_id,x,y`.
// `frame` is a non-negative integer, `track_id` any non-empty string without
// commas, x and y finite decimals in meters. Lines starting with '#' are
// comments and empty lines are skipped. The canonical form written here
// starts with the header comment, sorts records by (frame, track_id), prints
// coordinates with 6 decimals and ends with a newline.
//
// Prediction manifest (`manifest.json` in a prediction directory):
//   {"format_version": 1,
//    "predictions": [{"scene_id": "s", "origin": 12, "file": "s__t12.csv"}, ...]}
// Without a manifest, prediction files are discovered by name as
// `<scene_id>__t<origin>.csv`. Ground-truth directories hold one
// `<scene_id>.csv` per scene.
//
// Machine report: JSON document tagged with format_version, carrying the
// configuration, the aggregate and one row per episode.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "trajeval/core_types.hpp"
#include "trajeval/episodes.hpp"

namespace trajeval {

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), source_(source), line_(line) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

inline constexpr int kManifestFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;
inline constexpr std::string_view kTrackFileHeader = "# frame,track_id,x,y";
inline constexpr std::string_view kTrackFileExtension = ".csv";

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  std::string s(buf, res.ptr);
  // "-0.000000" and "0.000000" must not both occur for the same value.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace detail

/// Parses track-file text. `source` names the input in error messages.
inline TrackSet parse_tracks_text(std::string_view text, const std::string& source = "<input>",
                                  SetRole role = SetRole::ground_truth) {
  std::map<std::string, std::vector<std::pair<TimeIndex, Point2>>> by_id;
  std::map<std::pair<std::int64_t, std::string>, std::size_t> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    for (std::size_t start = 0;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 4) {
      throw ParseError(source, line_no, "expected 4 comma-separated fields, found " + std::to_string(fields.size()));
    }

    std::int64_t frame = 0;
    {
      const auto f = fields[0];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), frame);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || frame < 0) {
        throw ParseError(source, line_no, "invalid frame '" + std::string(f) + "'");
      }
    }
    if (fields[1].empty()) throw ParseError(source, line_no, "empty track id");
    std::string id(fields[1]);

    double coord[2];
    for (int k = 0; k < 2; ++k) {
      const auto f = fields[2 + k];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), coord[k]);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        throw ParseError(source, line_no, "invalid coordinate '" + std::string(f) + "'");
      }
      if (!std::isfinite(coord[k])) throw ParseError(source, line_no, "non-finite coordinate '" + std::string(f) + "'");
    }

    auto [it, inserted] = seen.emplace(std::make_pair(frame, id), line_no);
    if (!inserted) {
      throw ParseError(source, line_no,
                       "duplicate state for track '" + id + "' at frame " + std::to_string(frame) +
                           " (first seen on line " + std::to_string(it->second) + ")");
    }
    by_id[id].emplace_back(TimeIndex(frame), Point2{coord[0], coord[1]});
  }

  std::vector<Track> tracks;
  tracks.reserve(by_id.size());
  for (auto& [id, states] : by_id) tracks.emplace_back(id, std::move(states));
  return TrackSet(std::move(tracks), role);
}

inline TrackSet parse_tracks(const std::filesystem::path& path, SetRole role = SetRole::ground_truth) {
  return parse_tracks_text(detail::read_file(path), path.string(), role);
}

/// Canonical track-file text.
inline std::string format_tracks(const TrackSet& set) {
  std::vector<std::tuple<std::int64_t, const std::string*, Point2>> records;
  records.reserve(set.state_count());
  for (const auto& t : set) {
    for (const auto& [time, p] : t.points()) records.emplace_back(time.value(), &t.id(), p);
  }
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), *std::get<1>(a)) < std::tie(std::get<0>(b), *std::get<1>(b));
  });
  std::string out(kTrackFileHeader);
  out += '\n';
  for (const auto& [frame, id, p] : records) {
    out += std::to_string(frame);
    out += ',';
    out += *id;
    out += ',';
    out += detail::fixed(p.x, 6);
    out += ',';
    out += detail::fixed(p.y, 6);
    out += '\n';
  }
  return out;
}

inline void write_tracks(const TrackSet& set, const std::filesystem::path& path) {
  for (const auto& t : set) {
    if (t.id().empty() || t.id().find_first_of(",\n\r") != std::string::npos) {
      throw Error("track id '" + t.id() + "' cannot be written to a track file");
    }
  }
  detail::write_file(path, format_tracks(set));
}

/// Scene id -> scene, from every `<scene_id>.csv` in `dir`.
inline std::map<std::string, SceneData> load_scene_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("'" + dir.string() + "' is not a directory");
  std::map<std::string, SceneData> scenes;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != kTrackFileExtension) continue;
    std::string id = entry.path().stem().string();
    scenes.emplace(id, SceneData{id, parse_tracks(entry.path())});
  }
  return scenes;
}

inline void write_scene_dir(const std::map<std::string, SceneData>& scenes, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [id, scene] : scenes) {
    write_tracks(scene.tracks, dir / (id + std::string(kTrackFileExtension)));
  }
}

inline std::string prediction_file_name(const std::string& scene_id, std::int64_t origin) {
  return scene_id + "__t" + std::to_string(origin) + std::string(kTrackFileExtension);
}

/// Reads `manifest.json` when present, otherwise discovers files by name.
inline PredictionSets load_prediction_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("'" + dir.string() + "' is not a directory");
  PredictionSets preds;
  const fs::path manifest_path = dir / "manifest.json";

  auto add = [&](const std::string& scene, std::int64_t origin, const fs::path& file) {
    if (origin < 0) throw Error(file.string() + ": negative origin");
    if (!preds.emplace(EpisodeKey{scene, origin}, parse_tracks(file, SetRole::prediction)).second) {
      throw Error(file.string() + ": duplicate predictions for scene '" + scene + "' origin " + std::to_string(origin));
    }
  };

  if (fs::exists(manifest_path)) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(detail::read_file(manifest_path));
      const int version = doc.at("format_version").get<int>();
      if (version != kManifestFormatVersion) {
        throw Error(manifest_path.string() + ": unsupported format_version " + std::to_string(version));
      }
      for (const auto& entry : doc.at("predictions")) {
        const fs::path file = dir / entry.at("file").get<std::string>();
        if (!fs::exists(file)) throw Error(manifest_path.string() + ": referenced file '" + file.string() + "' does not exist");
        add(entry.at("scene_id").get<std::string>(), entry.at("origin").get<std::int64_t>(), file);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(manifest_path.string() + ": malformed manifest: " + e.what());
    }
    return preds;
  }

  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != kTrackFileExtension) continue;
    const std::string stem = entry.path().stem().string();
    const std::size_t sep = stem.rfind("__t");
    std::int64_t origin = -1;
    bool ok = sep != std::string::npos && sep > 0;
    if (ok) {
      const char* b = stem.data() + sep + 3;
      const char* e = stem.data() + stem.size();
      auto [ptr, ec] = std::from_chars(b, e, origin);
      ok = b != e && ec == std::errc() && ptr == e;
    }
    if (!ok) throw Error(entry.path().string() + ": prediction file name must be <scene_id>__t<origin>.csv");
    add(stem.substr(0, sep), origin, entry.path());
  }
  return preds;
}

inline void write_prediction_dir(const PredictionSets& preds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["format_version"] = kManifestFormatVersion;
  manifest["predictions"] = nlohmann::ordered_json::array();
  for (const auto& [key, set] : preds) {
    const std::string name = prediction_file_name(key.first, key.second);
    write_tracks(set, dir / name);
    manifest["predictions"].push_back({{"scene_id", key.first}, {"origin", key.second}, {"file", name}});
  }
  detail::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

enum class ReportFormat { table, machine };

inline nlohmann::ordered_json report_to_json(const MetricReport& report) {
  using nlohmann::ordered_json;
  const auto& cfg = report.config;
  const auto& m = report.metrics;
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };

  ordered_json doc;
  doc["format_version"] = kReportFormatVersion;
  doc["config"] = {{"cutoff_c", cfg.cutoff_c},
                   {"ospa_order_p", cfg.ospa_order_p},
                   {"idf1_threshold", cfg.idf1_threshold},
                   {"horizon_frames", cfg.horizon_frames},
                   {"obs_frames", cfg.obs_frames},
                   {"stride_frames", cfg.stride_frames},
                   {"frame_period", cfg.frame_period},
                   {"aggregation", cfg.per_scene ? "per_scene" : "pooled"}};
  ordered_json metrics = ordered_json::array();
  if (m.efe) metrics.push_back("efe");
  if (m.ospa2) metrics.push_back("ospa2");
  if (m.idf1) metrics.push_back("idf1");
  doc["metrics"] = metrics;

  const auto& a = report.aggregate;
  ordered_json agg;
  agg["episode_count"] = a.episode_count;
  if (m.efe) agg["efe"] = opt(a.efe);
  if (m.ospa2) agg["ospa2"] = opt(a.ospa2);
  if (m.idf1) {
    agg["idf1"] = opt(a.idf1);
    agg["idtp"] = a.counts.idtp;
    agg["idfp"] = a.counts.idfp;
    agg["idfn"] = a.counts.idfn;
  }
  doc["aggregate"] = agg;

  ordered_json rows = ordered_json::array();
  for (const auto& r : report.per_episode) {
    ordered_json row;
    row["scene_id"] = r.scene_id;
    row["origin"] = r.origin.value();
    if (m.efe) row["efe"] = r.efe;
    if (m.ospa2) row["ospa2"] = r.ospa2;
    if (m.idf1) {
      row["idf1"] = r.idf1;
      row["idtp"] = r.counts.idtp;
      row["idfp"] = r.counts.idfp;
      row["idfn"] = r.counts.idfn;
    }
    row["cardinality_gap"] = r.cardinality_gap;
    rows.push_back(std::move(row));
  }
  doc["episodes"] = rows;
  return doc;
}

inline std::string format_report_table(const MetricReport& report) {
  const auto& cfg = report.config;
  const auto& a = report.aggregate;
  auto value = [](const std::optional<double>& v) { return v ? detail::fixed(*v, 3) : std::string("-"); };
  auto line = [](const std::string& label, const std::string& v) {
    std::string s = "  " + label;
    // Arrows are 3 bytes of UTF-8 but one column wide.
    std::size_t width = 0;
    for (unsigned char ch : label) width += (ch & 0xC0) != 0x80;
    s.append(width < 18 ? 18 - width : 1, ' ');
    s.append(v.size() < 10 ? 10 - v.size() : 0, ' ');
    return s + v + "\n";
  };

  std::string out = "episodes: " + std::to_string(a.episode_count) + " (" +
                    (cfg.per_scene ? "mean of scene means" : "mean over all episodes") + ")\n";
  out += "parameters: c=" + detail::fixed(cfg.cutoff_c, 3) + " m, ospa p=" + detail::fixed(cfg.ospa_order_p, 3) +
         ", idf1 gate=" + detail::fixed(cfg.idf1_threshold, 3) + " m, horizon=" + std::to_string(cfg.horizon_frames) +
         " frames, obs=" + std::to_string(cfg.obs_frames) + " frames, stride=" + std::to_string(cfg.stride_frames) +
         "\n";
  out += line("Metric", "Value");
  if (report.metrics.efe) out += line("EFE ↓", value(a.efe));
  if (report.metrics.ospa2) out += line("OSPA-2 ↓", value(a.ospa2));
  if (report.metrics.idf1) {
    out += line("IDF1 ↑", value(a.idf1));
    out += line("IDTP/IDFP/IDFN", std::to_string(a.counts.idtp) + "/" + std::to_string(a.counts.idfp) + "/" +
                                      std::to_string(a.counts.idfn));
  }
  return out;
}

inline std::string format_report(const MetricReport& report, ReportFormat format) {
  if (format == ReportFormat::table) return format_report_table(report);
  return report_to_json(report).dump(2) + "\n";
}

inline void write_report(const MetricReport& report, const std::filesystem::path& path, ReportFormat format) {
  detail::write_file(path, format_report(report, format));
}

/// Aggregate section of a machine report.
inline Aggregate parse_report_aggregate(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("format_version").get<int>() != kReportFormatVersion) throw Error("unsupported report format_version");
    const auto& agg = doc.at("aggregate");
    Aggregate a;
    a.episode_count = agg.at("episode_count").get<std::size_t>();
    auto opt = [&](const char* key) -> std::optional<double> {
      if (!agg.contains(key) || agg[key].is_null()) return std::nullopt;
      return agg[key].get<double>();
    };
    a.efe = opt("efe");
    a.ospa2 = opt("ospa2");
    a.idf1 = opt("idf1");
    if (agg.contains("idtp")) {
      a.counts.idtp = agg["idtp"].get<std::uint64_t>();
      a.counts.idfp = agg["idfp"].get<std::uint64_t>();
      a.counts.idfn = agg["idfn"].get<std::uint64_t>();
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
}

}  // namespace trajeval
