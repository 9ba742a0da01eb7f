// trajeval: evaluate, forecast, degrade and generate trajectory sets.
//
// Exit codes: 0 success, 1 input error, 2 internal error.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "trajeval/trajeval.hpp"

namespace fs = std::filesystem;
using namespace trajeval;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

MetricSelection parse_metrics(const std::string& list) {
  MetricSelection sel{false, false, false};
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "efe") {
      sel.efe = true;
    } else if (item == "ospa2" || item == "ospa-2") {
      sel.ospa2 = true;
    } else if (item == "idf1") {
      sel.idf1 = true;
    } else {
      throw Error("unknown metric '" + item + "' (expected efe, ospa2, idf1)");
    }
  }
  if (!sel.efe && !sel.ospa2 && !sel.idf1) throw Error("--metrics selects nothing");
  return sel;
}

// Per-scene stream: splitmix64 finaliser over seed ^ FNV-1a(scene_id).
std::uint64_t scene_seed(std::uint64_t seed, const std::string& scene_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : scene_id) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct EvaluateArgs {
  std::string gt, pred, metrics = "efe,ospa2,idf1", out = "-", format = "table";
  EvalConfig cfg;
  unsigned jobs = 1;
};

int run_evaluate(const EvaluateArgs& a) {
  a.cfg.validate();
  const MetricSelection sel = parse_metrics(a.metrics);
  const auto gt = load_scene_dir(a.gt);
  const auto preds = load_prediction_dir(a.pred);
  const auto report = evaluate(preds, gt, a.cfg, sel, a.jobs);
  const ReportFormat fmt = a.format == "machine" ? ReportFormat::machine : ReportFormat::table;
  if (a.out == "-") {
    std::cout << format_report(report, fmt);
  } else {
    write_report(report, a.out, fmt);
  }
  return kExitOk;
}

struct ForecastArgs {
  std::string obs, model = "zero-velocity", out, episodes_from;
  EvalConfig cfg;
  std::size_t min_obs = 1;
};

int run_forecast(const ForecastArgs& a) {
  a.cfg.validate();
  const ForecastModel model = a.model == "const-velocity" ? ForecastModel::constant_velocity : ForecastModel::zero_velocity;
  const auto observed = load_scene_dir(a.obs);
  const auto episode_source = a.episodes_from.empty() ? observed : load_scene_dir(a.episodes_from);

  PredictionSets preds;
  for (const auto& [id, scene] : episode_source) {
    const auto obs_it = observed.find(id);
    for (const auto& ep : enumerate_episodes(scene, a.cfg)) {
      TrackSet window = obs_it == observed.end() ? TrackSet{} : restrict(obs_it->second.tracks, ep.obs_window);
      ForecastRequest req{std::move(window), ep.origin, a.cfg.horizon_frames};
      preds.emplace(EpisodeKey{id, ep.origin.value()}, forecast(req, model, a.min_obs));
    }
  }
  write_prediction_dir(preds, a.out);
  return kExitOk;
}

struct DegradeArgs {
  std::string gt, out;
  DegradeParams params;
};

int run_degrade(const DegradeArgs& a) {
  a.params.validate();
  auto scenes = load_scene_dir(a.gt);
  for (auto& [id, scene] : scenes) {
    DegradeParams p = a.params;
    p.seed = scene_seed(a.params.seed, id);
    scene.tracks = degrade(scene.tracks, p);
  }
  write_scene_dir(scenes, a.out);
  return kExitOk;
}

struct GenArgs {
  std::string scenario = "linear", out;
  std::size_t agents = 5, scenes = 1;
  std::int64_t frames = 20;
  std::uint64_t seed = 0;
};

int run_gen(const GenArgs& a) {
  const Scenario scenario = parse_scenario(a.scenario);
  std::map<std::string, SceneData> out;
  for (std::size_t s = 0; s < a.scenes; ++s) {
    char id[64];
    std::snprintf(id, sizeof id, "%s_%03zu", a.scenario.c_str(), s);
    out.emplace(id, SceneData{id, generate_scene(scenario, a.agents, a.frames, scene_seed(a.seed, id))});
  }
  write_scene_dir(out, a.out);
  return kExitOk;
}

void add_config_flags(CLI::App* cmd, EvalConfig& cfg, const char* obs_flag) {
  cmd->add_option("--horizon", cfg.horizon_frames, "future window length in frames")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option(obs_flag, cfg.obs_frames, "observation window length in frames (>= 2)")
      ->capture_default_str()
      ->check(CLI::Range(std::int64_t{2}, std::numeric_limits<std::int64_t>::max()));
  cmd->add_option("--stride", cfg.stride_frames, "frames between episode origins")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--frame-period", cfg.frame_period, "seconds per frame")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity-free evaluation toolkit for end-to-end trajectory forecasting"};
  app.require_subcommand(1);

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score predictions against ground truth (EFE, OSPA-2, IDF1)");
  evaluate_cmd->add_option("--gt", ev.gt, "directory of <scene_id>.csv ground-truth track files")->required();
  evaluate_cmd->add_option("--pred", ev.pred, "prediction directory (manifest.json or <scene_id>__t<origin>.csv)")
      ->required();
  evaluate_cmd->add_option("--metrics", ev.metrics, "comma-separated subset of efe,ospa2,idf1")->capture_default_str();
  evaluate_cmd->add_option("--cutoff", ev.cfg.cutoff_c, "cutoff distance c in meters (EFE and OSPA-2)")
      ->capture_default_str();
  evaluate_cmd->add_option("--idf1-threshold", ev.cfg.idf1_threshold, "IDF1 match gate in meters")
      ->capture_default_str();
  evaluate_cmd->add_option("--ospa-p", ev.cfg.ospa_order_p, "OSPA-2 order p (>= 1)")->capture_default_str();
  add_config_flags(evaluate_cmd, ev.cfg, "--obs");
  evaluate_cmd->add_flag("--per-scene", ev.cfg.per_scene, "average scene means instead of pooling all episodes");
  evaluate_cmd->add_option("--out", ev.out, "report path, '-' for stdout")->capture_default_str();
  evaluate_cmd->add_option("--format", ev.format, "report format")
      ->capture_default_str()
      ->check(CLI::IsMember({"table", "machine"}));
  evaluate_cmd->add_option("--jobs", ev.jobs, "worker threads")
      ->envname("TRAJEVAL_JOBS")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  ForecastArgs fc;
  auto* forecast_cmd = app.add_subcommand("forecast", "run a baseline forecaster over every episode");
  forecast_cmd->add_option("--obs", fc.obs, "directory of observed <scene_id>.csv track files")->required();
  forecast_cmd->add_option("--model", fc.model, "forecaster")
      ->capture_default_str()
      ->check(CLI::IsMember({"zero-velocity", "const-velocity"}));
  add_config_flags(forecast_cmd, fc.cfg, "--obs-frames");
  forecast_cmd->add_option("--min-obs", fc.min_obs, "skip tracks with fewer observed states in the window")
      ->capture_default_str();
  forecast_cmd->add_option("--episodes-from", fc.episodes_from,
                           "scene directory defining episode origins (default: the observation directory)");
  forecast_cmd->add_option("--out", fc.out, "output prediction directory")->required();

  DegradeArgs dg;
  auto* degrade_cmd = app.add_subcommand("degrade", "simulate detector/tracker errors on clean tracks");
  degrade_cmd->add_option("--gt", dg.gt, "directory of clean <scene_id>.csv track files")->required();
  degrade_cmd->add_option("--miss-rate", dg.params.miss_rate, "per-state deletion probability")
      ->capture_default_str();
  degrade_cmd->add_option("--fp-rate", dg.params.fp_rate, "false-track probability per block of --false-track-len frames")
      ->capture_default_str();
  degrade_cmd->add_option("--id-switch-rate", dg.params.id_switch_rate, "per-track split probability")
      ->capture_default_str();
  degrade_cmd->add_option("--noise-sigma", dg.params.noise_sigma, "Gaussian position noise in meters")
      ->capture_default_str();
  degrade_cmd->add_option("--false-track-len", dg.params.false_track_max_len, "maximum false-track lifespan in frames")
      ->capture_default_str();
  degrade_cmd->add_option("--seed", dg.params.seed, "random seed")->capture_default_str();
  degrade_cmd->add_option("--out", dg.out, "output directory")->required();

  GenArgs gn;
  auto* gen_cmd = app.add_subcommand("gen", "write synthetic ground-truth scenes");
  gen_cmd->add_option("--scenario", gn.scenario, "motion pattern")
      ->capture_default_str()
      ->check(CLI::IsMember({"static", "linear", "crossing"}));
  gen_cmd->add_option("--agents", gn.agents, "agents per scene")->capture_default_str();
  gen_cmd->add_option("--frames", gn.frames, "frames per scene")->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--scenes", gn.scenes, "number of scenes")->capture_default_str();
  gen_cmd->add_option("--seed", gn.seed, "random seed")->capture_default_str();
  gen_cmd->add_option("--out", gn.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*evaluate_cmd) return run_evaluate(ev);
    if (*forecast_cmd) return run_forecast(fc);
    if (*degrade_cmd) return run_degrade(dg);
    if (*gen_cmd) return run_gen(gn);
  } catch (const trajeval::Error& e) {
    std::cerr << "trajeval: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "trajeval: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "trajeval: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
