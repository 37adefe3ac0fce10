#pragma once

#include "deskstereo/cost.hpp"
#include "deskstereo/image.hpp"
#include "deskstereo/lcn.hpp"

namespace deskstereo {

/// D x H x W matching costs over integer disparity candidates.
/// Stored disparity-innermost: cell (i,j,d) at ((i*W)+j)*D + (d-d_min).
struct CostVolume {
  int d_min = 0;
  int d_max = 0;
  int width = 0;
  int height = 0;
  std::vector<double> cost;
  std::vector<uint8_t> valid;

  CostVolume() = default;
  CostVolume(int dmin, int dmax, int w, int h)
      : d_min(dmin), d_max(dmax), width(w), height(h),
        cost(static_cast<size_t>(w) * h * (dmax - dmin + 1), 0.0),
        valid(static_cast<size_t>(w) * h * (dmax - dmin + 1), 0) {}

  int planes() const { return d_max - d_min + 1; }
  size_t cell(int i, int j, int d) const {
    return (static_cast<size_t>(i) * width + j) * planes() + (d - d_min);
  }
  double& at(int i, int j, int d) { return cost[cell(i, j, d)]; }
  double at(int i, int j, int d) const { return cost[cell(i, j, d)]; }
  bool is_valid(int i, int j, int d) const { return valid[cell(i, j, d)] != 0; }
};

enum class CostKind { Photometric, Wlcn };

struct AswParams {
  int k = 16;                 // 2k x 2k support window
  double sigma_w_8bit = 2.0;  // weight sigma on the 8-bit intensity scale
};

struct VolumeConfig {
  CostKind cost = CostKind::Wlcn;
  bool use_asw = true;
  AswParams asw;
  int lcn_radius = kLcnDefaultRadius;
  double lcn_eta = kLcnDefaultEta;
};

/// Plane d holds the per-pixel cost of matching left(i,j) against
/// right(i,j-d), optionally ASW-aggregated with the raw left image as guide.
/// Cells with j-d out of frame are invalid.
CostVolume build_volume(const Image& left, const Image& right, int d_min,
                        int d_max, const VolumeConfig& cfg, int threads = 0);

/// Differentiable readout: d* = sum_d d * softmax(-C/temperature)_d over the
/// valid planes of each pixel. Pixels with no valid plane come back invalid.
DisparityMap soft_argmin(const CostVolume& vol, double temperature, int threads = 0);

/// Jacobian of soft_argmin per cell: dd*/dC_d = -(1/T) p_d (d - d*).
/// Returned in a volume of the same shape; invalid cells hold zero.
CostVolume soft_argmin_grad(const CostVolume& vol, double temperature, int threads = 0);

/// Winner-take-all with parabola subpixel refinement. Ties break to the
/// smallest disparity; no refinement at range ends or flat curvature.
DisparityMap wta_subpixel(const CostVolume& vol, int threads = 0);

struct LandscapeSample {
  int d = 0;
  double cost = 0.0;
  bool valid = false;
};

/// Cost-vs-disparity curve at one pixel.
std::vector<LandscapeSample> landscape(const CostVolume& vol, int i, int j);

}  // namespace deskstereo
