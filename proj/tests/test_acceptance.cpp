// Acceptance suite: one test case per numbered criterion, each printing a
// single PASS/FAIL line with its measured values. Tolerances are pinned
// here, not derived at runtime.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cstdarg>
#include <cstdio>

#include "oracles.hpp"

#include "deskstereo/cost.hpp"
#include "deskstereo/cost_volume.hpp"
#include "deskstereo/evalkit.hpp"
#include "deskstereo/geometry.hpp"
#include "deskstereo/invalidate.hpp"
#include "deskstereo/lcn.hpp"
#include "deskstereo/matcher.hpp"
#include "deskstereo/plane_fit.hpp"
#include "deskstereo/render.hpp"
#include "deskstereo/scene.hpp"
#include "deskstereo/warp.hpp"

using namespace deskstereo;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, const char* name, bool pass, const std::string& detail) {
  std::printf("ACCEPTANCE %d (%s): %s — %s\n", criterion, name,
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

MatchConfig default_cfg(int d_max = 64) {
  MatchConfig cfg;  // wlcn + asw-32 + wta-subpixel
  cfg.d_max = d_max;
  return cfg;
}

struct WallRun {
  double z;
  RenderedPair pair;
  MatchResult result;
};

// 7-wall battery, matched once and shared by criteria 4 and 5.
const std::vector<WallRun>& wall_battery() {
  static std::vector<WallRun> runs = [] {
    std::vector<WallRun> out;
    for (double z : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5}) {
      SceneSpec spec = builtin_scene("wall:" + std::to_string(z));
      auto pair = render_pair(spec);
      const int d_max = z < 0.9 ? 112 : 64;  // wall:0.5 sits at 100.8 px
      auto res = match(pair.left, pair.right, default_cfg(d_max));
      out.push_back({z, std::move(pair), std::move(res)});
    }
    return out;
  }();
  return runs;
}

}  // namespace

TEST_CASE("criterion 1: gradient suite") {
  const auto t0 = Clock::now();
  int instances = 0;
  double worst_warp = 0.0, worst_soft = 0.0, worst_e2e = 0.0;

  // warp_grad vs central differences on random instances
  const double h = 1e-4;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    Image src = oracle::random_image(16, 16, 7000 + seed);
    DisparityMap d(16, 16, 0.0, 1);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        d.at(i, j) = 0.2 + 3.0 * uniform01(hash_combine(seed, i, j)) * 0.9 + 0.05;
    Image g = warp_grad(src, d);
    DisparityMap dp = d, dm = d;
    for (auto& v : dp.values) v += h;
    for (auto& v : dm.values) v -= h;
    auto wp = warp_scanline(src, dp);
    auto wm = warp_scanline(src, dm);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        if (!wp.valid.at(i, j) || !wm.valid.at(i, j)) continue;
        const double frac = d.at(i, j) - std::floor(d.at(i, j));
        if (frac < 10 * h || frac > 1 - 10 * h) continue;
        const double fd = (wp.image.at(i, j) - wm.image.at(i, j)) / (2 * h);
        worst_warp = std::max(worst_warp,
                              std::abs(g.at(i, j) - fd) / (1.0 + std::abs(g.at(i, j))));
      }
    ++instances;
  }

  // soft_argmin_grad vs central differences
  for (uint64_t seed = 0; seed < 60; ++seed) {
    CostVolume vol(0, 7, 1, 1);
    for (int d = 0; d <= 7; ++d) {
      vol.at(0, 0, d) = 3.0 * uniform01(hash_combine(seed, d, 17));
      vol.valid[vol.cell(0, 0, d)] = 1;
    }
    auto g = soft_argmin_grad(vol, 1.0);
    const double hs = 1e-6;
    for (int d = 0; d <= 7; ++d) {
      CostVolume vp = vol, vm = vol;
      vp.at(0, 0, d) += hs;
      vm.at(0, 0, d) -= hs;
      const double fd =
          (soft_argmin(vp, 1.0).at(0, 0) - soft_argmin(vm, 1.0).at(0, 0)) / (2 * hs);
      worst_soft = std::max(worst_soft, std::abs(g.at(0, 0, d) - fd) /
                                            (1.0 + std::abs(g.at(0, 0, d))));
    }
    ++instances;
  }

  // end-to-end objective gradient (loss -> ASW -> WLCN -> warp) on random
  // 16x16 instances, via a single tiny descent step
  for (uint64_t seed = 0; seed < 12; ++seed) {
    Image left = oracle::random_image(16, 16, 8000 + seed);
    Image blur(16, 16);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        double s = 0.0;
        int n = 0;
        for (int dj = -1; dj <= 1; ++dj)
          if (left.in_bounds(i, j + dj)) { s += left.at(i, j + dj); ++n; }
        blur.at(i, j) = s / n;
      }
    MatchConfig cfg;
    cfg.volume.asw.k = 3;
    cfg.d_max = 8;
    DisparityMap d0(16, 16, 0.0, 1);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j)
        d0.at(i, j) = 0.15 + 2.0 * uniform01(hash_combine(seed, i, j + 99)) * 0.7;

    MatchConfig step = cfg;
    step.refine.steps = 1;
    step.refine.learning_rate = 1e-7;
    auto stepped = refine_gd(left, blur, d0, step);

    MatchConfig eval_cfg = cfg;
    eval_cfg.refine.steps = 0;
    auto obj = [&](const DisparityMap& d) {
      return refine_gd(left, blur, d, eval_cfg).objective_trace.front();
    };
    const double hh = 1e-5;
    for (auto [pi, pj] : {std::pair{5, 8}, {9, 12}, {12, 5}}) {
      const double frac = d0.at(pi, pj) - std::floor(d0.at(pi, pj));
      if (frac < 20 * hh || frac > 1 - 20 * hh) continue;
      const double g =
          (d0.at(pi, pj) - stepped.disparity.at(pi, pj)) / step.refine.learning_rate;
      DisparityMap dp = d0, dm = d0;
      dp.at(pi, pj) += hh;
      dm.at(pi, pj) -= hh;
      const double fd = (obj(dp) - obj(dm)) / (2 * hh);
      worst_e2e = std::max(worst_e2e, std::abs(g - fd) / (1.0 + std::abs(fd)));
    }
    ++instances;
  }

  const double secs = seconds_since(t0);
  const bool pass = worst_warp <= 1e-6 && worst_soft <= 1e-6 && worst_e2e <= 1e-5 &&
                    instances >= 100 && secs < 10.0;
  report(1, "gradient suite", pass,
         fmt("warp rel %.2e <= 1e-6, soft-argmin rel %.2e <= 1e-6, end-to-end rel "
             "%.2e <= 1e-5, %d instances, %.1fs < 10s",
             worst_warp, worst_soft, worst_e2e, instances, secs));
  CHECK(worst_warp <= 1e-6);
  CHECK(worst_soft <= 1e-6);
  CHECK(worst_e2e <= 1e-5);
  CHECK(instances >= 100);
  CHECK(secs < 10.0);
}

TEST_CASE("criterion 2: oracle equivalence") {
  const auto t0 = Clock::now();
  double worst = 0.0;

  for (uint64_t seed = 1; seed <= 6; ++seed) {
    const int w = 8 + static_cast<int>(hash_mix(seed) % 25);
    const int h = 8 + static_cast<int>(hash_mix(seed * 3) % 25);

    // local_stats
    Image img = oracle::random_image(w, h, seed);
    auto fast = local_stats(img, 2 + static_cast<int>(seed % 3));
    auto ref = oracle::local_stats_ref(img, 2 + static_cast<int>(seed % 3));
    for (size_t p = 0; p < img.size(); ++p) {
      worst = std::max(worst, std::abs(fast.mu.data[p] - ref.mu.data[p]));
      worst = std::max(worst, std::abs(fast.sigma.data[p] - ref.sigma.data[p]));
    }

    // asw_aggregate
    CostMap c(w, h);
    c.valid = Mask(w, h, 1);
    for (size_t p = 0; p < c.cost.size(); ++p)
      c.cost[p] = uniform01(hash_combine(seed, 5, p));
    c.valid.data[seed % c.valid.data.size()] = 0;
    auto a_fast = asw_aggregate(c, img, 3, sigma_w_from_8bit(2.0));
    auto a_ref = oracle::asw_aggregate_ref(c, img, 3, sigma_w_from_8bit(2.0));
    for (size_t p = 0; p < c.cost.size(); ++p)
      if (a_ref.valid.data[p]) worst = std::max(worst, std::abs(a_fast.cost[p] - a_ref.cost[p]));

    // disparity_error_curve
    DisparityMap pred(w, h, 0.0, 1), gt(w, h, 0.0, 1);
    Mask occ(w, h, 0);
    for (int p = 0; p < w * h; ++p) {
      pred.values[p] = 10.0 * uniform01(hash_combine(seed, 6, p));
      gt.values[p] = 10.0 * uniform01(hash_combine(seed, 7, p));
      occ.data[p] = uniform01(hash_combine(seed, 8, p)) < 0.15 ? 1 : 0;
    }
    const std::vector<double> xs{1, 2, 3, 4, 5};
    auto e_fast = disparity_error_curve(pred, gt, occ, xs);
    auto e_ref = oracle::error_curve_ref(pred, gt, occ, xs);
    for (size_t t = 0; t < xs.size(); ++t)
      worst = std::max(worst, std::abs(e_fast[t] - e_ref[t]));

    // build_volume against per-plane warp + cost + asw composition
    Image right = oracle::random_image(w, h, seed + 50);
    VolumeConfig vcfg;
    vcfg.asw.k = 3;
    auto vol = build_volume(img, right, 0, 6, vcfg);
    auto ln = lcn_normalize(img, vcfg.lcn_eta, vcfg.lcn_radius);
    auto rn = lcn_normalize(right, vcfg.lcn_eta, vcfg.lcn_radius);
    for (int d = 0; d <= 6; ++d) {
      DisparityMap dm(w, h, static_cast<double>(d), 1);
      auto warped = warp_scanline(rn.normalized, dm);
      auto raw = wlcn_cost(ln.normalized, warped.image, ln.stats.sigma, warped.valid);
      auto plane = oracle::asw_aggregate_ref(raw, img, vcfg.asw.k,
                                             sigma_w_from_8bit(vcfg.asw.sigma_w_8bit));
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
          if (vol.is_valid(i, j, d) && plane.valid.at(i, j))
            worst = std::max(worst, std::abs(vol.at(i, j, d) - plane.at(i, j)));
    }
  }

  const double secs = seconds_since(t0);
  const bool pass = worst <= 1e-10 && secs < 30.0;
  report(2, "oracle equivalence", pass,
         fmt("max |fast - oracle| %.2e <= 1e-10 over local_stats/asw/error-curve/"
             "volume, %.1fs < 30s",
             worst, secs));
  CHECK(worst <= 1e-10);
  CHECK(secs < 30.0);
}

TEST_CASE("criterion 3: cost landscape") {
  // local minima within 5% of the global min, band measured on the curve's
  // own range: cost <= min + 0.05 * (max - min)
  auto minima_in_band = [](const std::vector<LandscapeSample>& curve,
                           std::vector<int>* where = nullptr) {
    double lo = 1e300, hi = -1e300;
    for (const auto& s : curve)
      if (s.valid) { lo = std::min(lo, s.cost); hi = std::max(hi, s.cost); }
    const double band = lo + 0.05 * (hi - lo);
    int count = 0;
    for (size_t t = 0; t < curve.size(); ++t) {
      if (!curve[t].valid) continue;
      const bool left_ok = t == 0 || !curve[t - 1].valid || curve[t].cost <= curve[t - 1].cost;
      const bool right_ok =
          t + 1 == curve.size() || !curve[t + 1].valid || curve[t].cost <= curve[t + 1].cost;
      if (left_ok && right_ok && curve[t].cost <= band) {
        ++count;
        if (where) where->push_back(curve[t].d);
      }
    }
    return count;
  };
  auto argmin_d = [](const std::vector<LandscapeSample>& curve) {
    double best = 1e300;
    int at = -1;
    for (const auto& s : curve)
      if (s.valid && s.cost < best) { best = s.cost; at = s.d; }
    return at;
  };

  // textured wall, ASW-32 WLCN: unique minimum within 1 px of gt
  SceneSpec wall = builtin_scene("wall:2.0");
  auto wp = render_pair(wall);
  VolumeConfig asw_cfg;  // wlcn + asw defaults
  auto asw_vol = build_volume(wp.left, wp.right, 0, 64, asw_cfg);
  int textured_total = 0, textured_good = 0;
  for (int i = 12; i < wall.height - 12; i += 7)
    for (int j = 40; j < wall.width - 12; j += 7) {
      if (wp.occlusion_left.at(i, j)) continue;
      auto curve = landscape(asw_vol, i, j);
      std::vector<int> where;
      const int n = minima_in_band(curve, &where);
      ++textured_total;
      if (n == 1 && std::abs(where[0] - wp.gt_disp_left.at(i, j)) <= 1.0) ++textured_good;
    }
  const double textured_frac = static_cast<double>(textured_good) / textured_total;

  // textureless scene, single-pixel cost: >= 2 near-minimal local minima
  SceneSpec flat = builtin_scene("textureless");
  auto fp = render_pair(flat);
  VolumeConfig raw_cfg;
  raw_cfg.use_asw = false;
  auto flat_vol = build_volume(fp.left, fp.right, 0, 64, raw_cfg);
  int flat_total = 0, flat_multi = 0;
  for (int i = 10; i < flat.height - 10; i += 5)
    for (int j = 70; j < flat.width - 10; j += 5) {
      ++flat_total;
      if (minima_in_band(landscape(flat_vol, i, j)) >= 2) ++flat_multi;
    }
  const double flat_frac = static_cast<double>(flat_multi) / flat_total;

  // occluded pixels, single-pixel cost: global min >= 1 px from gt
  SceneSpec boxs = builtin_scene("box");
  auto bp = render_pair(boxs);
  auto box_vol = build_volume(bp.left, bp.right, 0, 64, raw_cfg);
  int occ_total = 0, occ_far = 0;
  for (int i = 0; i < boxs.height; ++i)
    for (int j = 40; j < boxs.width; ++j) {
      if (!bp.occlusion_left.at(i, j)) continue;
      const int am = argmin_d(landscape(box_vol, i, j));
      if (am < 0) continue;
      ++occ_total;
      if (std::abs(am - bp.gt_disp_left.at(i, j)) >= 1.0) ++occ_far;
    }
  const double occ_frac = occ_total ? static_cast<double>(occ_far) / occ_total : 0.0;

  const bool pass = textured_frac >= 0.95 && flat_frac >= 0.50 && occ_frac >= 0.80;
  report(3, "cost landscape", pass,
         fmt("textured unique-min@gt %.3f >= 0.95 (n=%d), textureless multi-min "
             "%.3f >= 0.50 (n=%d), occluded min-off-gt %.3f >= 0.80 (n=%d)",
             textured_frac, textured_total, flat_frac, flat_total, occ_frac, occ_total));
  CHECK(textured_frac >= 0.95);
  CHECK(flat_frac >= 0.50);
  CHECK(occ_frac >= 0.80);
}

TEST_CASE("criterion 4: matcher accuracy and ablation ordering") {
  double err_sum = 0.0;
  long within = 0, total = 0;
  for (const auto& run : wall_battery()) {
    const auto& gt = run.pair.gt_disp_left;
    for (int i = 0; i < gt.height; ++i)
      for (int j = 0; j < gt.width; ++j) {
        if (run.pair.occlusion_left.at(i, j) || !run.result.valid.at(i, j)) continue;
        const double e = std::abs(run.result.left.at(i, j) - gt.at(i, j));
        err_sum += e;
        within += e < 1.0 ? 1 : 0;
        ++total;
      }
  }
  const double frac1 = static_cast<double>(within) / total;
  const double mean_err = err_sum / total;

  // photometric / no-aggregation ablation on the 2 m wall
  MatchConfig photo = default_cfg();
  photo.volume.cost = CostKind::Photometric;
  photo.volume.use_asw = false;
  const auto& wall2 = wall_battery()[3];
  auto ablated = match(wall2.pair.left, wall2.pair.right, photo);
  long a_within = 0, a_total = 0;
  for (int i = 0; i < wall2.pair.gt_disp_left.height; ++i)
    for (int j = 0; j < wall2.pair.gt_disp_left.width; ++j) {
      if (wall2.pair.occlusion_left.at(i, j) || !ablated.valid.at(i, j)) continue;
      ++a_total;
      a_within +=
          std::abs(ablated.left.at(i, j) - wall2.pair.gt_disp_left.at(i, j)) < 1.0 ? 1 : 0;
    }
  const double ablated_frac = a_total ? static_cast<double>(a_within) / a_total : 0.0;

  const bool pass = frac1 >= 0.95 && mean_err <= 0.25 && ablated_frac < frac1;
  report(4, "matcher accuracy", pass,
         fmt("battery <1px %.4f >= 0.95, mean |err| %.4f <= 0.25 px (n=%ld), "
             "photometric ablation <1px %.4f < %.4f",
             frac1, mean_err, total, ablated_frac, frac1));
  CHECK(frac1 >= 0.95);
  CHECK(mean_err <= 0.25);
  CHECK(ablated_frac < frac1);
}

TEST_CASE("criterion 5: quadratic error law") {
  const CameraRig rig{560.0, 0.09};
  std::vector<std::pair<double, double>> z_bias;
  for (const auto& run : wall_battery()) {
    DisparityMap masked = run.result.left;
    for (size_t p = 0; p < masked.valid.data.size(); ++p)
      if (!run.result.valid.data[p] || run.pair.occlusion_left.data[p])
        masked.valid.data[p] = 0;
    auto depth = depth_map(masked, rig);
    auto bj = bias_jitter(depth, Plane{{0.0, 0.0, 1.0}, run.z}, rig);
    z_bias.push_back({run.z, bj.bias_m});
  }

  auto fit = fit_subpixel_delta(z_bias, rig);

  // log-log slope of bias vs Z
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [z, b] : z_bias) {
    const double x = std::log(z), y = std::log(std::max(b, 1e-12));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double n = static_cast<double>(z_bias.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  // exact inversion of synthetic data
  std::vector<std::pair<double, double>> synth;
  for (double z : {0.6, 1.1, 1.9, 2.4, 3.2})
    synth.push_back({z, expected_depth_error(z, 0.17, rig)});
  auto exact = fit_subpixel_delta(synth, rig);
  const double inv_err = std::abs(exact.delta_px - 0.17);

  const bool pass = fit.r2 >= 0.9 && std::abs(slope - 2.0) <= 0.3 &&
                    fit.delta_px <= 0.3 && inv_err <= 1e-12 &&
                    std::abs(exact.r2 - 1.0) <= 1e-12;
  report(5, "quadratic error law", pass,
         fmt("R2 %.4f >= 0.9, log-log slope %.3f in 2 +- 0.3, delta %.4f <= 0.3 px, "
             "synthetic inversion |delta-0.17| %.2e <= 1e-12",
             fit.r2, slope, fit.delta_px, inv_err));
  CHECK(fit.r2 >= 0.9);
  CHECK(std::abs(slope - 2.0) <= 0.3);
  CHECK(fit.delta_px <= 0.3);
  CHECK(inv_err <= 1e-12);
}

TEST_CASE("criterion 6: invalidation ordering") {
  SceneSpec spec = builtin_scene("box");
  auto pair = render_pair(spec);

  // raw per-view readouts, before any LR masking, so occluded pixels still
  // carry a score for the AP comparison
  VolumeConfig vcfg;
  auto left_disp = wta_subpixel(build_volume(pair.left, pair.right, 0, 64, vcfg));
  auto mirrored = wta_subpixel(
      build_volume(flip_horizontal(pair.right), flip_horizontal(pair.left), 0, 64, vcfg));
  auto right_disp = flip_horizontal(mirrored);

  auto lr_conf = lr_residual_confidence(left_disp, right_disp);
  auto warped = warp_scanline(pair.right, left_disp);
  auto photo_conf = photometric_confidence(pair.left, warped.image, warped.valid);

  const double ap_lr = mask_ap(lr_conf, pair.occlusion_left);
  const double ap_photo = mask_ap(photo_conf, pair.occlusion_left);

  // lr_check at theta=1 on the ground-truth maps vs gt occlusion, IoU
  // outside a 1-px boundary band
  auto checked = lr_check(pair.gt_disp_left, pair.gt_disp_right, 1.0);
  long inter = 0, uni = 0;
  const Mask& occ = pair.occlusion_left;
  for (int i = 1; i < occ.height - 1; ++i)
    for (int j = 1; j < occ.width - 1; ++j) {
      bool boundary = false;
      for (int a = -1; a <= 1 && !boundary; ++a)
        for (int b = -1; b <= 1; ++b)
          if (occ.at(i + a, j + b) != occ.at(i, j)) { boundary = true; break; }
      if (boundary) continue;
      const bool pred_occ = checked.at(i, j) == 0;
      const bool is_occ = occ.at(i, j) != 0;
      inter += (pred_occ && is_occ) ? 1 : 0;
      uni += (pred_occ || is_occ) ? 1 : 0;
    }
  const double iou = uni ? static_cast<double>(inter) / uni : 0.0;

  const bool pass = ap_lr - ap_photo >= 0.15 && iou >= 0.9;
  report(6, "invalidation ordering", pass,
         fmt("AP(lr) %.3f - AP(photo) %.3f = %.3f >= 0.15, lr_check IoU %.3f >= 0.9",
             ap_lr, ap_photo, ap_lr - ap_photo, iou));
  CHECK(ap_lr - ap_photo >= 0.15);
  CHECK(iou >= 0.9);
}

TEST_CASE("criterion 7: noise model and falloff") {
  // noise std at fixed I*: flat ambient, no dots, pre-clamp comparison is
  // approximated by keeping I* mid-range so the clamp never triggers
  SceneSpec spec = builtin_scene("textureless");
  spec.width = 1024;
  spec.height = 1024;  // > 1e6 samples
  spec.ambient.amplitude = 0.55;
  for (auto& p : spec.primitives) p.albedo = 1.0;
  auto pair = render_pair(spec);
  double istar = 0.0;
  for (double v : pair.noiseless_left.data) istar += v;
  istar /= pair.noiseless_left.size();
  const double want_std = spec.noise.sigma1 * istar + spec.noise.sigma2;
  double var = 0.0;
  for (size_t p = 0; p < pair.left.size(); ++p) {
    const double e = pair.left.data[p] - pair.noiseless_left.data[p];
    var += e * e;
  }
  const double got_std = std::sqrt(var / pair.left.size());
  const double noise_rel = std::abs(got_std - want_std) / want_std;

  // falloff: dotted wall with no ambient/noise; compare mean intensity at Z
  // and 2Z on the same pattern
  auto dot_mean = [](double z) {
    SceneSpec s = builtin_scene("wall:" + std::to_string(z));
    s.falloff_k = 1.0;  // undo the battery's per-scene exposure
    s.ambient.amplitude = 0.0;
    s.noise = NoiseModel{0.0, 0.0};
    s.dots.gain = 0.05;  // keep peaks well under the clamp at both depths
    auto p = render_pair(s);
    double m = 0.0;
    for (double v : p.noiseless_left.data) m += v;
    return m / p.noiseless_left.size();
  };
  const double ratio = dot_mean(1.2) / dot_mean(2.4);
  const double falloff_rel = std::abs(ratio - 4.0) / 4.0;

  const bool pass = noise_rel <= 0.02 && falloff_rel <= 0.02;
  report(7, "noise model", pass,
         fmt("noise std rel err %.4f <= 0.02 (%zu samples), falloff Z->2Z ratio "
             "%.3f within 4 +- 2%%",
             noise_rel, pair.left.size(), ratio));
  CHECK(noise_rel <= 0.02);
  CHECK(falloff_rel <= 0.02);
}

TEST_CASE("criterion 8: wlcn brightness invariance") {
  SceneSpec spec = builtin_scene("wall:2.0");
  auto pair = render_pair(spec);
  DisparityMap gt = pair.gt_disp_left;

  // scale the non-reference input: the sigma_ref re-weighting makes the
  // WLCN cost deliberately proportional to reference-side contrast, so the
  // invariance claim is about the matching residual, probed from the right
  auto mean_costs = [&](double a) {
    Image scaled = pair.right;
    for (auto& v : scaled.data) v *= a;

    auto warped_raw = warp_scanline(scaled, gt);
    auto photo = photometric_cost(pair.left, warped_raw.image, warped_raw.valid);

    auto ln = lcn_normalize(pair.left, kLcnDefaultEta, kLcnDefaultRadius);
    auto rn = lcn_normalize(scaled, kLcnDefaultEta, kLcnDefaultRadius);
    auto warped_lcn = warp_scanline(rn.normalized, gt);
    auto wl = wlcn_cost(ln.normalized, warped_lcn.image, ln.stats.sigma, warped_lcn.valid);

    double pm = 0.0, wm = 0.0;
    long n = 0;
    for (size_t p = 0; p < photo.cost.size(); ++p)
      if (photo.valid.data[p] && wl.valid.data[p] && !pair.occlusion_left.data[p]) {
        pm += photo.cost[p];
        wm += wl.cost[p];
        ++n;
      }
    return std::pair{pm / n, wm / n};
  };

  const auto base = mean_costs(1.0);
  double worst_photo = 0.0, worst_wlcn = 0.0;
  for (double a : {0.5, 2.0}) {
    const auto scaled = mean_costs(a);
    worst_photo = std::max(worst_photo, std::abs(scaled.first - base.first) / base.first);
    worst_wlcn = std::max(worst_wlcn, std::abs(scaled.second - base.second) / base.second);
  }

  const bool pass = worst_wlcn < 0.01 && worst_photo > 0.20;
  report(8, "wlcn brightness invariance", pass,
         fmt("mean WLCN cost change %.4f%% < 1%%, mean photometric change %.1f%% > 20%% "
             "under a in {0.5, 2}",
             100 * worst_wlcn, 100 * worst_photo));
  CHECK(worst_wlcn < 0.01);
  CHECK(worst_photo > 0.20);
}

TEST_CASE("criterion 9: determinism and performance") {
  // determinism across thread counts on a mixed scene
  SceneSpec spec = builtin_scene("box");
  auto p1 = render_pair(spec, 1);
  auto p4 = render_pair(spec, 4);
  const bool render_det = p1.left.data == p4.left.data && p1.right.data == p4.right.data;
  auto m1 = match(p1.left, p1.right, default_cfg(), 1);
  auto m4 = match(p1.left, p1.right, default_cfg(), 4);
  const bool match_det = m1.left.values == m4.left.values &&
                         m1.right.values == m4.right.values && m1.valid.data == m4.valid.data;

  // single-thread full match at 320x240, D=64
  SceneSpec big = builtin_scene("wall:2.0");
  big.width = 320;
  big.height = 240;
  auto bp = render_pair(big);
  auto t0 = Clock::now();
  auto bres = match(bp.left, bp.right, default_cfg(), 1);
  const double match_secs = seconds_since(t0);

  // volume-stage scaling, 1 thread vs 4
  VolumeConfig vcfg;
  t0 = Clock::now();
  auto v1 = build_volume(bp.left, bp.right, 0, 64, vcfg, 1);
  const double vol1 = seconds_since(t0);
  t0 = Clock::now();
  auto v4 = build_volume(bp.left, bp.right, 0, 64, vcfg, 4);
  const double vol4 = seconds_since(t0);
  const bool vol_det = v1.cost == v4.cost;
  const double speedup = vol1 / vol4;

  const bool pass = render_det && match_det && vol_det && match_secs < 2.0 &&
                    speedup >= 2.0;
  report(9, "determinism and performance", pass,
         fmt("bit-identical across threads %s, 320x240/D=64 match %.2fs < 2s, "
             "volume stage 4-thread speedup %.2fx >= 2x (%.2fs -> %.2fs)",
             (render_det && match_det && vol_det) ? "yes" : "NO", match_secs, speedup,
             vol1, vol4));
  CHECK(render_det);
  CHECK(match_det);
  CHECK(vol_det);
  CHECK(match_secs < 2.0);
  CHECK(speedup >= 2.0);
  (void)bres;
}
