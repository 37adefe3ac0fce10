#pragma once

#include <cstdint>
#include <vector>

#include "deskstereo/scene.hpp"

namespace deskstereo {

/// Plane n . p = offset with |n| = 1.
struct Plane {
  Vec3 normal = {0.0, 0.0, 1.0};
  double offset = 0.0;

  double signed_distance(const Vec3& p) const {
    return normal[0] * p[0] + normal[1] * p[1] + normal[2] * p[2] - offset;
  }
};

struct RansacParams {
  int iterations = 256;
  double inlier_tol_m = 0.01;
  uint64_t seed = 7;
};

/// Seeded RANSAC plane fit followed by a total-least-squares refit on the
/// inliers of the best hypothesis. Throws on degenerate (collinear) input.
Plane fit_plane_robust(const std::vector<Vec3>& points, const RansacParams& params);

/// Plain total-least-squares fit (centroid + smallest covariance direction).
Plane fit_plane_tls(const std::vector<Vec3>& points);

}  // namespace deskstereo
