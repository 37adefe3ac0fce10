#pragma once

#include <stdexcept>

namespace deskstereo {

/// Rectified stereo rig: focal length in pixels, baseline in meters.
struct CameraRig {
  double focal_px = 0.0;
  double baseline_m = 0.0;

  void validate() const {
    if (!(focal_px > 0.0)) throw std::invalid_argument("CameraRig: focal must be > 0");
    if (!(baseline_m > 0.0)) throw std::invalid_argument("CameraRig: baseline must be > 0");
  }
};

/// Z = b*f/d, d in pixels, Z in meters.
double disparity_to_depth(double d, const CameraRig& rig);

/// d = b*f/Z.
double depth_to_disparity(double z, const CameraRig& rig);

/// Depth error for a subpixel disparity error delta: eps = delta*Z^2/(b*f).
double expected_depth_error(double z, double delta, const CameraRig& rig);

}  // namespace deskstereo
