#pragma once

#include <string>
#include <vector>

#include "deskstereo/image.hpp"
#include "deskstereo/plane_fit.hpp"

namespace deskstereo {

struct DepthMap {
  Image z;     // meters; meaningful only where valid
  Mask valid;
};

/// Per-pixel Z = b*f/d over valid pixels; d <= 0 invalidates a pixel.
DepthMap depth_map(const DisparityMap& d, const CameraRig& rig);

/// Back-projects valid depth pixels into 3D camera-frame points
/// (principal point at the image center).
std::vector<Vec3> depth_to_points(const DepthMap& depth, const CameraRig& rig);

struct BiasJitter {
  double bias_m = 0.0;    // mean |depth - plane depth along the ray|
  double jitter_m = 0.0;  // std of the signed error
  size_t n_pixels = 0;
};

/// Depth error measured along each viewing ray against a reference plane.
/// Requires >= 100 valid pixels with a ray actually hitting the plane.
BiasJitter bias_jitter(const DepthMap& depth, const Plane& plane, const CameraRig& rig);

struct SubpixelFit {
  double delta_px = 0.0;
  double r2 = 0.0;
};

/// Least squares of eps_i ~ delta * Z_i^2/(b f) over (Z, bias) samples;
/// closed form in delta. Needs >= 3 samples at distinct Z.
SubpixelFit fit_subpixel_delta(const std::vector<std::pair<double, double>>& z_bias,
                               const CameraRig& rig);

/// Fraction of non-occluded valid pixels with |d_pred - d_gt| < x per
/// threshold. Throws when the evaluation set is empty.
std::vector<double> disparity_error_curve(const DisparityMap& pred,
                                          const DisparityMap& gt,
                                          const Mask& occluded,
                                          const std::vector<double>& thresholds);

struct IntensityBin {
  double mean_abs_error = 0.0;
  size_t count = 0;
};

/// Mean |ref - recon| binned by reference intensity over equal-width bins
/// spanning [0,1]. Empty bins report count 0.
std::vector<IntensityBin> intensity_binned_error(const Image& ref, const Image& recon,
                                                 const Mask& mask, int n_bins);

struct DistanceRow {
  double z_nominal = 0.0;
  double bias_m = 0.0;
  double jitter_m = 0.0;
  size_t n_pixels = 0;
};

struct EvalReport {
  std::string schema = "deskstereo-eval/1";
  std::vector<DistanceRow> per_distance;
  double delta_px = 0.0;
  double fit_r2 = 0.0;
  std::vector<double> error_curve_thresholds;
  std::vector<double> error_curve_fractions;
  double ap_lr = -1.0;          // -1 = not computed
  double ap_photometric = -1.0;
  uint64_t ransac_seed = 0;
  std::string config_echo;
};

std::string eval_report_to_json(const EvalReport& report);
void save_eval_report(const std::string& path, const EvalReport& report);

}  // namespace deskstereo
