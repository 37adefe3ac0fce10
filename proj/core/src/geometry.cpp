#include "deskstereo/geometry.hpp"

namespace deskstereo {

double disparity_to_depth(double d, const CameraRig& rig) {
  rig.validate();
  if (!(d > 0.0)) throw std::invalid_argument("disparity_to_depth: d must be > 0");
  return rig.baseline_m * rig.focal_px / d;
}

double depth_to_disparity(double z, const CameraRig& rig) {
  rig.validate();
  if (!(z > 0.0)) throw std::invalid_argument("depth_to_disparity: Z must be > 0");
  return rig.baseline_m * rig.focal_px / z;
}

double expected_depth_error(double z, double delta, const CameraRig& rig) {
  rig.validate();
  if (!(z > 0.0)) throw std::invalid_argument("expected_depth_error: Z must be > 0");
  if (delta < 0.0) throw std::invalid_argument("expected_depth_error: delta must be >= 0");
  return delta * z * z / (rig.baseline_m * rig.focal_px);
}

}  // namespace deskstereo
