#include "deskstereo/plane_fit.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "deskstereo/rng.hpp"

namespace deskstereo {

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

}  // namespace

Plane fit_plane_tls(const std::vector<Vec3>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit_plane_tls: need >= 3 points");
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : points) centroid += Eigen::Vector3d(p[0], p[1], p[2]);
  centroid /= static_cast<double>(points.size());

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d d = Eigen::Vector3d(p[0], p[1], p[2]) - centroid;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  const Eigen::Vector3d n = es.eigenvectors().col(0);  // smallest eigenvalue
  if (es.eigenvalues()(1) <= 1e-12 * std::max(1.0, es.eigenvalues()(2)))
    throw std::invalid_argument("fit_plane_tls: degenerate (collinear) points");

  Plane plane;
  plane.normal = {n(0), n(1), n(2)};
  plane.offset = n.dot(centroid);
  if (plane.offset < 0.0) {  // canonical orientation
    plane.normal = {-n(0), -n(1), -n(2)};
    plane.offset = -plane.offset;
  }
  return plane;
}

Plane fit_plane_robust(const std::vector<Vec3>& points, const RansacParams& params) {
  const size_t n = points.size();
  if (n < 3) throw std::invalid_argument("fit_plane_robust: need >= 3 points");

  size_t best_inliers = 0;
  Plane best;
  bool found = false;
  for (int it = 0; it < params.iterations; ++it) {
    const size_t a = hash_combine(params.seed, it, 0) % n;
    const size_t b = hash_combine(params.seed, it, 1) % n;
    const size_t c = hash_combine(params.seed, it, 2) % n;
    if (a == b || b == c || a == c) continue;
    const Vec3 nv = cross(sub(points[b], points[a]), sub(points[c], points[a]));
    const double len = norm(nv);
    if (len < 1e-12) continue;
    Plane cand;
    cand.normal = {nv[0] / len, nv[1] / len, nv[2] / len};
    cand.offset = cand.normal[0] * points[a][0] + cand.normal[1] * points[a][1] +
                  cand.normal[2] * points[a][2];
    size_t inliers = 0;
    for (const auto& p : points)
      if (std::abs(cand.signed_distance(p)) <= params.inlier_tol_m) ++inliers;
    if (inliers > best_inliers) {
      best_inliers = inliers;
      best = cand;
      found = true;
    }
  }
  if (!found) throw std::invalid_argument("fit_plane_robust: degenerate input");

  std::vector<Vec3> inl;
  inl.reserve(best_inliers);
  for (const auto& p : points)
    if (std::abs(best.signed_distance(p)) <= params.inlier_tol_m) inl.push_back(p);
  if (inl.size() < 3) return best;
  return fit_plane_tls(inl);
}

}  // namespace deskstereo
