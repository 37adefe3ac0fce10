#include "deskstereo/matcher.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "deskstereo/invalidate.hpp"

namespace deskstereo {

using nlohmann::json;

void MatchConfig::validate() const {
  if (d_min < 0 || d_max <= d_min) throw std::invalid_argument("MatchConfig: invalid disparity range");
  if (!(temperature > 0.0)) throw std::invalid_argument("MatchConfig: temperature must be > 0");
  if (!(lr_theta > 0.0)) throw std::invalid_argument("MatchConfig: lr_theta must be > 0");
  if (refine.steps < 0) throw std::invalid_argument("MatchConfig: refine steps must be >= 0");
  if (refine.lambda < 0.0) throw std::invalid_argument("MatchConfig: lambda must be >= 0");
  if (volume.use_asw && volume.asw.k < 1) throw std::invalid_argument("MatchConfig: asw k must be >= 1");
}

std::string match_config_to_json(const MatchConfig& c) {
  json j;
  j["cost"] = c.volume.cost == CostKind::Wlcn ? "wlcn" : "photometric";
  j["aggregation"] = c.volume.use_asw ? "asw" : "none";
  j["asw"] = {{"k", c.volume.asw.k}, {"sigma_w_8bit", c.volume.asw.sigma_w_8bit}};
  j["lcn"] = {{"radius", c.volume.lcn_radius}, {"eta", c.volume.lcn_eta}};
  j["readout"] = c.readout == Readout::WtaSubpixel ? "wta" : "soft_argmin";
  j["temperature"] = c.temperature;
  j["d_min"] = c.d_min;
  j["d_max"] = c.d_max;
  j["lr_theta"] = c.lr_theta;
  j["refine"] = {{"steps", c.refine.steps},
                 {"learning_rate", c.refine.learning_rate},
                 {"lambda", c.refine.lambda},
                 {"huber_delta", c.refine.huber_delta},
                 {"schedule", c.refine.schedule},
                 {"k_start", c.refine.k_start},
                 {"halve_every", c.refine.halve_every}};
  return j.dump(2);
}

MatchConfig match_config_from_json(const std::string& text) {
  json j = json::parse(text);
  MatchConfig c;
  const std::string cost = j.value("cost", "wlcn");
  if (cost == "wlcn") c.volume.cost = CostKind::Wlcn;
  else if (cost == "photometric") c.volume.cost = CostKind::Photometric;
  else throw std::invalid_argument("MatchConfig: unknown cost '" + cost + "'");
  const std::string agg = j.value("aggregation", "asw");
  if (agg == "asw") c.volume.use_asw = true;
  else if (agg == "none") c.volume.use_asw = false;
  else throw std::invalid_argument("MatchConfig: unknown aggregation '" + agg + "'");
  if (j.contains("asw")) {
    c.volume.asw.k = j["asw"].value("k", c.volume.asw.k);
    c.volume.asw.sigma_w_8bit = j["asw"].value("sigma_w_8bit", c.volume.asw.sigma_w_8bit);
  }
  if (j.contains("lcn")) {
    c.volume.lcn_radius = j["lcn"].value("radius", c.volume.lcn_radius);
    c.volume.lcn_eta = j["lcn"].value("eta", c.volume.lcn_eta);
  }
  const std::string readout = j.value("readout", "wta");
  if (readout == "wta") c.readout = Readout::WtaSubpixel;
  else if (readout == "soft_argmin") c.readout = Readout::SoftArgmin;
  else throw std::invalid_argument("MatchConfig: unknown readout '" + readout + "'");
  c.temperature = j.value("temperature", c.temperature);
  c.d_min = j.value("d_min", c.d_min);
  c.d_max = j.value("d_max", c.d_max);
  c.lr_theta = j.value("lr_theta", c.lr_theta);
  if (j.contains("refine")) {
    const auto& r = j["refine"];
    c.refine.steps = r.value("steps", c.refine.steps);
    c.refine.learning_rate = r.value("learning_rate", c.refine.learning_rate);
    c.refine.lambda = r.value("lambda", c.refine.lambda);
    c.refine.huber_delta = r.value("huber_delta", c.refine.huber_delta);
    c.refine.schedule = r.value("schedule", c.refine.schedule);
    c.refine.k_start = r.value("k_start", c.refine.k_start);
    c.refine.halve_every = r.value("halve_every", c.refine.halve_every);
  }
  c.validate();
  return c;
}

MatchConfig load_match_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  return match_config_from_json(ss.str());
}

namespace {

bool is_constant(const Image& img) {
  const auto [mn, mx] = std::minmax_element(img.data.begin(), img.data.end());
  return *mx - *mn < 1e-12;
}

DisparityMap run_one_view(const Image& ref, const Image& mov, const MatchConfig& cfg,
                          int threads) {
  CostVolume vol = build_volume(ref, mov, cfg.d_min, cfg.d_max, cfg.volume, threads);
  return cfg.readout == Readout::WtaSubpixel ? wta_subpixel(vol, threads)
                                             : soft_argmin(vol, cfg.temperature, threads);
}

}  // namespace

MatchResult match(const Image& left, const Image& right, const MatchConfig& cfg,
                  int threads) {
  cfg.validate();
  if (!left.same_size(right)) throw std::invalid_argument("match: size mismatch");

  MatchResult res;
  if (is_constant(left) || is_constant(right)) {
    res.left = DisparityMap(left.width, left.height);
    res.right = DisparityMap(left.width, left.height);
    res.valid = Mask(left.width, left.height);
    res.degenerate = true;
    return res;
  }

  res.left = run_one_view(left, right, cfg, threads);
  // Right-reference solve via mirror symmetry of the scanline geometry.
  const Image fl = flip_horizontal(right);
  const Image fr = flip_horizontal(left);
  res.right = flip_horizontal(run_one_view(fl, fr, cfg, threads));

  if (cfg.refine.steps > 0) {
    RefineResult rl = refine_gd(left, right, res.left, cfg, threads);
    res.left = std::move(rl.disparity);
    res.objective_trace = std::move(rl.objective_trace);
    MatchConfig mirror = cfg;
    RefineResult rr = refine_gd(fl, fr, flip_horizontal(res.right), mirror, threads);
    res.right = flip_horizontal(rr.disparity);
  }

  res.valid = lr_check(res.left, res.right, cfg.lr_theta);
  for (size_t p = 0; p < res.valid.data.size(); ++p)
    if (!res.valid.data[p]) res.left.valid.data[p] = 0;
  return res;
}

}  // namespace deskstereo
