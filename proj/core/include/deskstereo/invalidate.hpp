#pragma once

#include "deskstereo/image.hpp"

namespace deskstereo {

/// Per-pixel invalidity score; higher means more likely invalid.
struct ConfidenceMap {
  int width = 0;
  int height = 0;
  std::vector<double> score;
  Mask valid;

  ConfidenceMap() = default;
  ConfidenceMap(int w, int h)
      : width(w), height(h), score(static_cast<size_t>(w) * h, 0.0), valid(w, h, 0) {}
  double& at(int i, int j) { return score[static_cast<size_t>(i) * width + j]; }
  double at(int i, int j) const { return score[static_cast<size_t>(i) * width + j]; }
};

/// Hard left-right consistency: pixel valid iff
/// |d_l(i,j) - d_r(i, j - d_l(i,j))| < theta, with d_r sampled at the
/// non-integer column (bilinear by default). Out-of-frame lookups invalidate.
Mask lr_check(const DisparityMap& d_left, const DisparityMap& d_right, double theta,
              bool bilinear = true);

/// The LR residual |d_l - d_r(warped)| as an invalidity score. Pixels whose
/// lookup leaves frame get the largest finite residual in the map + 1, so
/// they rank as most-likely-invalid.
ConfidenceMap lr_residual_confidence(const DisparityMap& d_left,
                                     const DisparityMap& d_right, bool bilinear = true);

/// |ref - recon| as an invalidity score (reconstruction-error baseline).
ConfidenceMap photometric_confidence(const Image& ref, const Image& recon,
                                     const Mask& mask);

/// Area under the precision-recall curve of scores against a binary
/// ground-truth mask (1 = positive/occluded). Pooled pixels, step-wise
/// interpolation, every distinct threshold. Only pixels valid in the score
/// map participate. Throws when there is no positive pixel.
double mask_ap(const ConfidenceMap& scores, const Mask& gt_positive);

}  // namespace deskstereo
