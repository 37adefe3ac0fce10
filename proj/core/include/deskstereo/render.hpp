#pragma once

#include "deskstereo/image.hpp"
#include "deskstereo/scene.hpp"

namespace deskstereo {

/// One rendered active-stereo observation with ground truth.
struct RenderedPair {
  Image left, right;                    // observed (noisy) intensities
  Image noiseless_left, noiseless_right;
  DisparityMap gt_disp_left, gt_disp_right;
  Mask occlusion_left;                  // 1 = occluded in the right view
  CameraRig rig;
  uint64_t seed = 0;
};

/// Deterministic raycast renderer. One primary ray per pixel; dots are
/// Gaussian splats projected from a virtual projector at the rig midpoint;
/// intensity falls off with squared projector distance. Same spec gives
/// bit-identical output for any thread count.
RenderedPair render_pair(const SceneSpec& spec, int threads = 0);

/// Ground-truth occlusion from the two gt maps: occluded iff
/// |d_l(i,j) - d_r(i, j - round(d_l))| >= theta or the lookup leaves frame.
Mask gt_occlusion(const DisparityMap& gt_left, const DisparityMap& gt_right,
                  double theta);

}  // namespace deskstereo
