#pragma once

#include "deskstereo/image.hpp"
#include "deskstereo/lcn.hpp"

namespace deskstereo {

/// Per-pixel nonnegative matching cost with validity.
struct CostMap {
  int width = 0;
  int height = 0;
  std::vector<double> cost;
  Mask valid;

  CostMap() = default;
  CostMap(int w, int h)
      : width(w), height(h), cost(static_cast<size_t>(w) * h, 0.0), valid(w, h, 0) {}

  double& at(int i, int j) { return cost[static_cast<size_t>(i) * width + j]; }
  double at(int i, int j) const { return cost[static_cast<size_t>(i) * width + j]; }
};

/// L1 photometric cost |ref - recon| on jointly valid pixels.
CostMap photometric_cost(const Image& ref, const Image& recon, const Mask& mask);

/// Sigma-reweighted LCN residual: sigma_ref * |ref_lcn - recon_lcn|.
/// ref_lcn and sigma_ref must come from the same lcn_normalize call on the
/// reference image; recon_lcn is the warped, already-normalized other view.
CostMap wlcn_cost(const Image& ref_lcn, const Image& recon_lcn,
                  const Image& sigma_ref, const Mask& mask);

/// Convert a weight sigma expressed on the 8-bit intensity scale (the usual
/// convention for |I_p - I_q| similarity kernels) to [0,1] image units.
inline double sigma_w_from_8bit(double sigma_w_8bit) { return sigma_w_8bit / 255.0; }

/// Adaptive-support-weight aggregation over a 2k x 2k window anchored
/// [i-k, i+k-1] x [j-k, j+k-1]:
///   out(i,j) = sum w(x,y) C(x,y) / sum w(x,y),
///   w(x,y)  = exp(-|guide(i,j) - guide(x,y)| / sigma_w)
/// Invalid cost cells carry zero weight; an all-invalid window yields an
/// invalid output pixel. sigma_w is in the guide's own intensity units.
CostMap asw_aggregate(const CostMap& costs, const Image& guide, int k,
                      double sigma_w, int threads = 0);

}  // namespace deskstereo
