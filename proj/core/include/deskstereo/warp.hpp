#pragma once

#include "deskstereo/image.hpp"

namespace deskstereo {

struct WarpResult {
  Image image;
  Mask valid;
};

/// Scanline reconstruction sampler: out(i,j) = src(i, j - d(i,j)) with
/// two-tap linear interpolation along the row. Samples with j-d outside
/// [0, W-1], or with invalid disparity, are masked out (never clamped).
WarpResult warp_scanline(const Image& source, const DisparityMap& disparity,
                         int threads = 0);

/// d(out)/d(disparity) of warp_scanline, per pixel.
/// Uses the sub-gradient of the active interpolation cell [floor(j-d), +1];
/// zero on masked pixels.
Image warp_grad(const Image& source, const DisparityMap& disparity, int threads = 0);

}  // namespace deskstereo
