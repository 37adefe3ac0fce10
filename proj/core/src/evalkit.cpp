#include "deskstereo/evalkit.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "deskstereo/geometry.hpp"

namespace deskstereo {

using nlohmann::json;

DepthMap depth_map(const DisparityMap& d, const CameraRig& rig) {
  rig.validate();
  DepthMap out;
  out.z = Image(d.width, d.height);
  out.valid = Mask(d.width, d.height);
  for (int i = 0; i < d.height; ++i)
    for (int j = 0; j < d.width; ++j) {
      if (!d.is_valid(i, j) || !(d.at(i, j) > 0.0)) continue;
      out.z.at(i, j) = rig.baseline_m * rig.focal_px / d.at(i, j);
      out.valid.at(i, j) = 1;
    }
  return out;
}

std::vector<Vec3> depth_to_points(const DepthMap& depth, const CameraRig& rig) {
  const double cx = (depth.z.width - 1) / 2.0, cy = (depth.z.height - 1) / 2.0;
  std::vector<Vec3> pts;
  pts.reserve(depth.valid.count());
  for (int i = 0; i < depth.z.height; ++i)
    for (int j = 0; j < depth.z.width; ++j) {
      if (!depth.valid.at(i, j)) continue;
      const double z = depth.z.at(i, j);
      pts.push_back({(j - cx) / rig.focal_px * z, (i - cy) / rig.focal_px * z, z});
    }
  return pts;
}

BiasJitter bias_jitter(const DepthMap& depth, const Plane& plane, const CameraRig& rig) {
  rig.validate();
  const double cx = (depth.z.width - 1) / 2.0, cy = (depth.z.height - 1) / 2.0;
  double sum_abs = 0.0, sum = 0.0, sum2 = 0.0;
  size_t n = 0;
  for (int i = 0; i < depth.z.height; ++i)
    for (int j = 0; j < depth.z.width; ++j) {
      if (!depth.valid.at(i, j)) continue;
      // ray through the pixel, parameterized by depth z
      const Vec3 dir = {(j - cx) / rig.focal_px, (i - cy) / rig.focal_px, 1.0};
      const double ndir = plane.normal[0] * dir[0] + plane.normal[1] * dir[1] +
                          plane.normal[2] * dir[2];
      if (std::abs(ndir) < 1e-12) continue;
      const double z_plane = plane.offset / ndir;
      if (!(z_plane > 0.0)) continue;
      const double err = depth.z.at(i, j) - z_plane;
      sum_abs += std::abs(err);
      sum += err;
      sum2 += err * err;
      ++n;
    }
  if (n < 100) throw std::invalid_argument("bias_jitter: fewer than 100 valid pixels");
  BiasJitter bj;
  bj.n_pixels = n;
  bj.bias_m = sum_abs / n;
  const double mean = sum / n;
  bj.jitter_m = std::sqrt(std::max(0.0, sum2 / n - mean * mean));
  return bj;
}

SubpixelFit fit_subpixel_delta(const std::vector<std::pair<double, double>>& z_bias,
                               const CameraRig& rig) {
  rig.validate();
  std::set<double> distinct;
  for (const auto& [z, eps] : z_bias) {
    if (!(z > 0.0)) throw std::invalid_argument("fit_subpixel_delta: Z must be > 0");
    distinct.insert(z);
  }
  if (distinct.size() < 3)
    throw std::invalid_argument("fit_subpixel_delta: need >= 3 distinct Z samples");

  const double bf = rig.baseline_m * rig.focal_px;
  double szz = 0.0, sez = 0.0, se = 0.0, see = 0.0;
  for (const auto& [z, eps] : z_bias) {
    const double zz = z * z / bf;
    szz += zz * zz;
    sez += eps * zz;
    se += eps;
    see += eps * eps;
  }
  SubpixelFit fit;
  fit.delta_px = szz > 0.0 ? sez / szz : 0.0;

  const double n = static_cast<double>(z_bias.size());
  const double mean_eps = se / n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& [z, eps] : z_bias) {
    const double pred = fit.delta_px * z * z / bf;
    ss_res += (eps - pred) * (eps - pred);
    ss_tot += (eps - mean_eps) * (eps - mean_eps);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

std::vector<double> disparity_error_curve(const DisparityMap& pred, const DisparityMap& gt,
                                          const Mask& occluded,
                                          const std::vector<double>& thresholds) {
  if (pred.width != gt.width || pred.height != gt.height ||
      occluded.width != gt.width || occluded.height != gt.height)
    throw std::invalid_argument("disparity_error_curve: size mismatch");
  size_t n = 0;
  std::vector<size_t> within(thresholds.size(), 0);
  for (int i = 0; i < pred.height; ++i)
    for (int j = 0; j < pred.width; ++j) {
      if (occluded.at(i, j) || !pred.is_valid(i, j) || !gt.is_valid(i, j)) continue;
      const double err = std::abs(pred.at(i, j) - gt.at(i, j));
      ++n;
      for (size_t t = 0; t < thresholds.size(); ++t)
        if (err < thresholds[t]) ++within[t];
    }
  if (n == 0) throw std::invalid_argument("disparity_error_curve: empty evaluation set");
  std::vector<double> fractions(thresholds.size());
  for (size_t t = 0; t < thresholds.size(); ++t)
    fractions[t] = static_cast<double>(within[t]) / n;
  return fractions;
}

std::vector<IntensityBin> intensity_binned_error(const Image& ref, const Image& recon,
                                                 const Mask& mask, int n_bins) {
  if (!ref.same_size(recon) || ref.width != mask.width || ref.height != mask.height)
    throw std::invalid_argument("intensity_binned_error: size mismatch");
  if (n_bins < 2) throw std::invalid_argument("intensity_binned_error: n_bins must be >= 2");
  std::vector<double> sums(n_bins, 0.0);
  std::vector<size_t> counts(n_bins, 0);
  for (size_t p = 0; p < ref.size(); ++p) {
    if (!mask.data[p]) continue;
    int b = static_cast<int>(ref.data[p] * n_bins);
    b = std::min(std::max(b, 0), n_bins - 1);
    sums[b] += std::abs(ref.data[p] - recon.data[p]);
    ++counts[b];
  }
  std::vector<IntensityBin> bins(n_bins);
  for (int b = 0; b < n_bins; ++b) {
    bins[b].count = counts[b];
    bins[b].mean_abs_error = counts[b] ? sums[b] / counts[b] : 0.0;
  }
  return bins;
}

std::string eval_report_to_json(const EvalReport& r) {
  json j;
  j["schema"] = r.schema;
  j["per_distance"] = json::array();
  for (const auto& row : r.per_distance)
    j["per_distance"].push_back({{"z_nominal", row.z_nominal},
                                 {"bias_m", row.bias_m},
                                 {"jitter_m", row.jitter_m},
                                 {"n_pixels", row.n_pixels}});
  j["delta_px"] = r.delta_px;
  j["fit_r2"] = r.fit_r2;
  j["error_curve"] = {{"thresholds_px", r.error_curve_thresholds},
                      {"fractions", r.error_curve_fractions}};
  if (r.ap_lr >= 0.0) j["ap_lr"] = r.ap_lr;
  if (r.ap_photometric >= 0.0) j["ap_photometric"] = r.ap_photometric;
  j["ransac_seed"] = r.ransac_seed;
  if (!r.config_echo.empty()) j["config"] = json::parse(r.config_echo);
  return j.dump(2);
}

void save_eval_report(const std::string& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << eval_report_to_json(report) << "\n";
}

}  // namespace deskstereo
