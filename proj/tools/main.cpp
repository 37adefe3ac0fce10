// deskstereo: synthetic active-stereo generation, matching, and evaluation.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "deskstereo/cost_volume.hpp"
#include "deskstereo/evalkit.hpp"
#include "deskstereo/image_io.hpp"
#include "deskstereo/invalidate.hpp"
#include "deskstereo/matcher.hpp"
#include "deskstereo/pair_io.hpp"
#include "deskstereo/parallel.hpp"
#include "deskstereo/render.hpp"
#include "deskstereo/scene.hpp"
#include "deskstereo/warp.hpp"

namespace ds = deskstereo;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// exit codes: 0 ok, 1 usage, 2 io, 3 numerical/degenerate input
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct RunManifest {
  json timings = json::object();
  json outputs = json::array();
  json inputs = json::array();
  json config = json::object();
  uint64_t seed = 0;

  void save(const fs::path& dir, const std::string& command) const {
    json j;
    j["tool"] = "deskstereo";
    j["version"] = kVersion;
    j["command"] = command;
    j["seed"] = seed;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["config"] = config;
    j["timings_s"] = timings;
    std::ofstream out(dir / "run_manifest.json");
    if (!out) throw std::runtime_error((dir / "run_manifest.json").string() + ": cannot write");
    out << j.dump(2) << "\n";
  }
};

ds::DisparityMap load_disparity(const fs::path& values, const fs::path& valid) {
  ds::Image v = ds::read_pfm(values.string());
  ds::DisparityMap d(v.width, v.height);
  d.values = v.data;
  ds::Mask m = ds::read_pgm_mask(valid.string());
  if (m.width != v.width || m.height != v.height)
    throw std::runtime_error(values.string() + ": validity mask size mismatch");
  d.valid = std::move(m);
  return d;
}

int cmd_gen(const std::string& scene_path, const std::string& builtin,
            const std::string& out_dir, int64_t seed_override, int threads) {
  ds::SceneSpec spec;
  if (!builtin.empty()) {
    spec = ds::builtin_scene(builtin);
  } else if (!scene_path.empty()) {
    spec = ds::load_scene(scene_path);
  } else {
    std::cerr << "gen: need --scene or --builtin\n";
    return kExitUsage;
  }
  if (seed_override >= 0) spec.seed = static_cast<uint64_t>(seed_override);

  RunManifest man;
  man.seed = spec.seed;
  man.config = json::parse(ds::scene_to_json(spec));
  Stopwatch sw;
  ds::RenderedPair pair = ds::render_pair(spec, threads);
  man.timings["render"] = sw.seconds();
  ds::save_pair(out_dir, pair, &spec);
  for (const char* f :
       {"left.pfm", "right.pfm", "noiseless_left.pfm", "noiseless_right.pfm",
        "gt_disp_left.pfm", "gt_disp_right.pfm", "occlusion_left.pgm", "manifest.json"})
    man.outputs.push_back(f);
  man.save(out_dir, "gen");
  std::cout << "gen: wrote " << out_dir << " (" << spec.width << "x" << spec.height
            << ", seed " << spec.seed << ")\n";
  return 0;
}

int cmd_match(const std::string& pair_dir, const std::string& config_path,
              const std::string& out_dir, int threads) {
  ds::LoadedPair lp = ds::load_pair(pair_dir);
  ds::MatchConfig cfg = config_path.empty() ? ds::MatchConfig{}
                                            : ds::load_match_config(config_path);
  RunManifest man;
  man.inputs.push_back(pair_dir);
  man.config = json::parse(ds::match_config_to_json(cfg));

  Stopwatch sw;
  ds::MatchResult res = ds::match(lp.pair.left, lp.pair.right, cfg, threads);
  man.timings["match"] = sw.seconds();

  fs::create_directories(out_dir);
  const fs::path base(out_dir);
  ds::Image dl(res.left.width, res.left.height);
  dl.data = res.left.values;
  ds::write_pfm((base / "disp_left.pfm").string(), dl);
  ds::Image dr(res.right.width, res.right.height);
  dr.data = res.right.values;
  ds::write_pfm((base / "disp_right.pfm").string(), dr);
  ds::write_pgm((base / "valid.pgm").string(), res.valid);
  ds::write_pgm((base / "disp_left_valid.pgm").string(), res.left.valid);
  ds::write_pgm((base / "disp_right_valid.pgm").string(), res.right.valid);
  man.outputs = {"disp_left.pfm", "disp_right.pfm", "valid.pgm",
                 "disp_left_valid.pgm", "disp_right_valid.pgm"};
  if (!res.objective_trace.empty()) {
    std::ofstream csv(base / "objective_trace.csv");
    csv << "iteration,objective\n";
    for (size_t i = 0; i < res.objective_trace.size(); ++i)
      csv << i << "," << res.objective_trace[i] << "\n";
    man.outputs.push_back("objective_trace.csv");
  }
  man.save(base, "match");
  if (res.degenerate)
    std::cout << "match: degenerate input, validity mask empty\n";
  else
    std::cout << "match: " << res.valid.count() << " valid pixels -> " << out_dir << "\n";
  return 0;
}

int cmd_eval(const std::vector<std::string>& pred_dirs,
             const std::vector<std::string>& pair_dirs, const std::string& out_path,
             uint64_t ransac_seed) {
  if (pred_dirs.size() != pair_dirs.size() || pred_dirs.empty()) {
    std::cerr << "eval: need matching --pred/--pair lists\n";
    return kExitUsage;
  }
  ds::EvalReport report;
  report.ransac_seed = ransac_seed;
  report.error_curve_thresholds = {1, 2, 3, 4, 5};
  std::vector<size_t> curve_hits(5, 0);
  size_t curve_n = 0;
  std::vector<std::pair<double, double>> z_bias;

  for (size_t s = 0; s < pred_dirs.size(); ++s) {
    const fs::path pred(pred_dirs[s]);
    ds::LoadedPair lp = ds::load_pair(pair_dirs[s]);
    ds::DisparityMap d = load_disparity(pred / "disp_left.pfm", pred / "disp_left_valid.pgm");
    if (d.width != lp.pair.left.width || d.height != lp.pair.left.height)
      throw std::invalid_argument("eval: prediction/pair size mismatch");

    ds::DepthMap depth = ds::depth_map(d, lp.pair.rig);
    ds::RansacParams rp;
    rp.seed = ransac_seed;
    ds::Plane plane = ds::fit_plane_robust(ds::depth_to_points(depth, lp.pair.rig), rp);
    ds::BiasJitter bj = ds::bias_jitter(depth, plane, lp.pair.rig);

    ds::DepthMap gt_depth = ds::depth_map(lp.pair.gt_disp_left, lp.pair.rig);
    double zsum = 0.0;
    size_t zn = 0;
    for (size_t p = 0; p < gt_depth.z.size(); ++p)
      if (gt_depth.valid.data[p]) {
        zsum += gt_depth.z.data[p];
        ++zn;
      }
    const double z_nom = zn ? zsum / zn : 0.0;
    report.per_distance.push_back({z_nom, bj.bias_m, bj.jitter_m, bj.n_pixels});
    z_bias.emplace_back(z_nom, bj.bias_m);

    const auto fr = ds::disparity_error_curve(d, lp.pair.gt_disp_left, lp.pair.occlusion_left,
                                              report.error_curve_thresholds);
    size_t n_pair = 0;
    for (int i = 0; i < d.height; ++i)
      for (int j = 0; j < d.width; ++j)
        if (!lp.pair.occlusion_left.at(i, j) && d.is_valid(i, j) &&
            lp.pair.gt_disp_left.is_valid(i, j))
          ++n_pair;
    for (size_t t = 0; t < fr.size(); ++t)
      curve_hits[t] += static_cast<size_t>(fr[t] * n_pair + 0.5);
    curve_n += n_pair;

    // occlusion AP when the scene actually has occluded pixels
    if (s == 0 && lp.pair.occlusion_left.count() > 0) {
      ds::DisparityMap dright =
          load_disparity(pred / "disp_right.pfm", pred / "disp_right_valid.pgm");
      ds::ConfidenceMap lrc = ds::lr_residual_confidence(d, dright);
      ds::WarpResult recon = ds::warp_scanline(lp.pair.right, d);
      ds::ConfidenceMap pc = ds::photometric_confidence(lp.pair.left, recon.image, recon.valid);
      try {
        report.ap_lr = ds::mask_ap(lrc, lp.pair.occlusion_left);
        report.ap_photometric = ds::mask_ap(pc, lp.pair.occlusion_left);
      } catch (const std::invalid_argument&) {
      }
    }
  }

  for (size_t t = 0; t < curve_hits.size(); ++t)
    report.error_curve_fractions.push_back(static_cast<double>(curve_hits[t]) / curve_n);

  std::set<double> distinct;
  for (auto& [z, e] : z_bias) distinct.insert(z);
  if (distinct.size() >= 3) {
    ds::CameraRig rig = ds::load_pair(pair_dirs[0]).pair.rig;
    const auto fit = ds::fit_subpixel_delta(z_bias, rig);
    report.delta_px = fit.delta_px;
    report.fit_r2 = fit.r2;
  }

  ds::save_eval_report(out_path, report);
  std::cout << "eval: wrote " << out_path << " (" << report.per_distance.size()
            << " rows)\n";
  return 0;
}

int cmd_landscape(const std::string& pair_dir, const std::string& config_path,
                  const std::string& pixels, const std::string& out_csv, int threads) {
  ds::LoadedPair lp = ds::load_pair(pair_dir);
  ds::MatchConfig cfg = config_path.empty() ? ds::MatchConfig{}
                                            : ds::load_match_config(config_path);
  ds::CostVolume vol =
      ds::build_volume(lp.pair.left, lp.pair.right, cfg.d_min, cfg.d_max, cfg.volume, threads);

  std::vector<std::pair<int, int>> pts;
  std::stringstream ss(pixels);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    const auto comma = tok.find(',');
    if (comma == std::string::npos) {
      std::cerr << "landscape: pixel list must be 'i,j;i,j;...'\n";
      return kExitUsage;
    }
    pts.emplace_back(std::stoi(tok.substr(0, comma)), std::stoi(tok.substr(comma + 1)));
  }
  if (pts.empty()) {
    std::cerr << "landscape: empty pixel list\n";
    return kExitUsage;
  }

  std::ofstream csv(out_csv);
  if (!csv) throw std::runtime_error(out_csv + ": cannot open for writing");
  csv << "i,j,d,cost,valid\n";
  for (const auto& [i, j] : pts)
    for (const auto& s : ds::landscape(vol, i, j))
      csv << i << "," << j << "," << s.d << "," << s.cost << "," << int(s.valid) << "\n";
  std::cout << "landscape: wrote " << out_csv << " (" << pts.size() << " pixels)\n";
  return 0;
}

int cmd_bench(int width, int height, int d_max, int threads) {
  ds::SceneSpec spec = ds::builtin_scene("wall:2.0");
  spec.width = width;
  spec.height = height;
  Stopwatch total;

  Stopwatch sw_render;
  ds::RenderedPair pair = ds::render_pair(spec, threads);
  const double t_render = sw_render.seconds();

  ds::MatchConfig cfg;
  cfg.d_max = d_max;

  Stopwatch sw_lcn;
  ds::lcn_normalize(pair.left, cfg.volume.lcn_eta, cfg.volume.lcn_radius, threads);
  const double t_lcn = sw_lcn.seconds();

  ds::VolumeConfig raw = cfg.volume;
  raw.use_asw = false;
  Stopwatch sw_raw;
  ds::CostVolume rawvol = ds::build_volume(pair.left, pair.right, 0, d_max, raw, threads);
  const double t_raw = sw_raw.seconds();

  Stopwatch sw_vol;
  ds::CostVolume vol = ds::build_volume(pair.left, pair.right, 0, d_max, cfg.volume, threads);
  const double t_vol = sw_vol.seconds();

  Stopwatch sw_read;
  ds::DisparityMap d = ds::wta_subpixel(vol, threads);
  const double t_read = sw_read.seconds();

  Stopwatch sw_match;
  ds::MatchResult res = ds::match(pair.left, pair.right, cfg, threads);
  const double t_match = sw_match.seconds();

  json j;
  j["size"] = {{"width", width}, {"height", height}, {"d_max", d_max}};
  j["threads"] = threads <= 0 ? ds::default_threads() : threads;
  j["timings_s"] = {{"render", t_render},        {"lcn", t_lcn},
                    {"volume_raw", t_raw},       {"volume_asw", t_vol},
                    {"readout", t_read},         {"full_match", t_match},
                    {"total", total.seconds()}};
  j["valid_pixels"] = res.valid.count();
  (void)d;
  (void)rawvol;
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deskstereo: active-stereo synthesis, matching, and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  int threads = 1;
  app.add_option("--threads", threads, "worker threads (output is thread-count invariant)");

  // gen
  auto* gen = app.add_subcommand("gen", "render a synthetic stereo pair");
  std::string gen_scene, gen_builtin, gen_out;
  int64_t gen_seed = -1;
  gen->add_option("--scene", gen_scene, "scene spec JSON path");
  gen->add_option("--builtin", gen_builtin, "builtin scene (wall:<Z>|slant:<deg>|box|textureless)");
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--seed", gen_seed, "override scene seed");

  // match
  auto* mat = app.add_subcommand("match", "estimate disparity for a rendered pair");
  std::string mat_pair, mat_config, mat_out;
  mat->add_option("--pair", mat_pair, "pair directory")->required();
  mat->add_option("--config", mat_config, "match config JSON (defaults: wlcn+asw+wta)");
  mat->add_option("--out", mat_out, "output directory")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate predictions against ground truth");
  std::vector<std::string> ev_pred, ev_pair;
  std::string ev_out;
  uint64_t ev_seed = 7;
  ev->add_option("--pred", ev_pred, "prediction directory (repeatable)")->required();
  ev->add_option("--pair", ev_pair, "pair directory (repeatable, 1:1 with --pred)")->required();
  ev->add_option("--out", ev_out, "output report path")->required();
  ev->add_option("--seed", ev_seed, "RANSAC seed");

  // landscape
  auto* land = app.add_subcommand("landscape", "dump cost-vs-disparity curves at pixels");
  std::string land_pair, land_config, land_pixels, land_out;
  land->add_option("--pair", land_pair, "pair directory")->required();
  land->add_option("--config", land_config, "match config JSON");
  land->add_option("--pixels", land_pixels, "semicolon list of i,j pairs")->required();
  land->add_option("--out", land_out, "output CSV path")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "time each pipeline stage");
  int b_w = 320, b_h = 240, b_d = 64;
  bench->add_option("--width", b_w, "image width");
  bench->add_option("--height", b_h, "image height");
  bench->add_option("--d-max", b_d, "maximum disparity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  ds::set_default_threads(threads);
  try {
    if (*gen) {
      try {
        return cmd_gen(gen_scene, gen_builtin, gen_out, gen_seed, threads);
      } catch (const std::invalid_argument& e) {
        // bad builtin name / malformed spec is a usage problem
        std::cerr << "gen: " << e.what() << "\n";
        return kExitUsage;
      }
    }
    if (*mat) return cmd_match(mat_pair, mat_config, mat_out, threads);
    if (*ev) return cmd_eval(ev_pred, ev_pair, ev_out, ev_seed);
    if (*land) return cmd_landscape(land_pair, land_config, land_pixels, land_out, threads);
    if (*bench) return cmd_bench(b_w, b_h, b_d, threads);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
