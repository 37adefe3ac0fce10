#include "deskstereo/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "deskstereo/parallel.hpp"
#include "deskstereo/rng.hpp"

namespace deskstereo {

namespace {

constexpr uint64_t kStreamLeftNoise = 1;
constexpr uint64_t kStreamRightNoise = 2;
constexpr uint64_t kStreamDots = 3;
constexpr uint64_t kStreamAmbient = 4;

struct Hit {
  double t = std::numeric_limits<double>::infinity();
  double albedo = 0.0;
  bool ok = false;
};

// Ray p = origin + t*dir with dir.z == 1, so t is the depth Z.
Hit intersect(const SceneSpec& spec, const Vec3& origin, const Vec3& dir) {
  Hit best;
  for (const auto& prim : spec.primitives) {
    if (prim.kind == Primitive::Kind::Plane) {
      const double nv = prim.normal[0] * dir[0] + prim.normal[1] * dir[1] + prim.normal[2] * dir[2];
      if (std::abs(nv) < 1e-12) continue;
      const double no = prim.normal[0] * origin[0] + prim.normal[1] * origin[1] + prim.normal[2] * origin[2];
      const double t = (prim.distance - no) / nv;
      if (t > 1e-9 && t < best.t) {
        best.t = t;
        best.albedo = prim.albedo;
        best.ok = true;
      }
    } else {
      double t0 = 1e-9, t1 = std::numeric_limits<double>::infinity();
      bool miss = false;
      for (int a = 0; a < 3 && !miss; ++a) {
        const double lo = prim.center[a] - prim.extents[a];
        const double hi = prim.center[a] + prim.extents[a];
        if (std::abs(dir[a]) < 1e-12) {
          if (origin[a] < lo || origin[a] > hi) miss = true;
          continue;
        }
        double ta = (lo - origin[a]) / dir[a];
        double tb = (hi - origin[a]) / dir[a];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) miss = true;
      }
      if (!miss && t0 < best.t) {
        best.t = t0;
        best.albedo = prim.albedo;
        best.ok = true;
      }
    }
  }
  return best;
}

// Projected dot pattern, defined on the projector image plane with a margin
// so every surface point seen by either camera lands on texture.
class DotField {
 public:
  DotField(const SceneSpec& spec)
      : sigma_(spec.dots.sigma_px), margin_(128), w_(spec.width + 2 * margin_),
        h_(spec.height + 2 * margin_) {
    cell_ = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_)));
    nx_ = (w_ + cell_ - 1) / cell_;
    ny_ = (h_ + cell_ - 1) / cell_;
    const size_t n = static_cast<size_t>(spec.dots.density * w_ * h_);
    xs_.resize(n);
    ys_.resize(n);
    grid_.assign(static_cast<size_t>(nx_) * ny_, {});
    for (size_t i = 0; i < n; ++i) {
      xs_[i] = uniform01(hash_combine(spec.seed, kStreamDots, 2 * i)) * w_ - margin_;
      ys_[i] = uniform01(hash_combine(spec.seed, kStreamDots, 2 * i + 1)) * h_ - margin_;
      const int cx = static_cast<int>((xs_[i] + margin_) / cell_);
      const int cy = static_cast<int>((ys_[i] + margin_) / cell_);
      grid_[static_cast<size_t>(cy) * nx_ + cx].push_back(static_cast<uint32_t>(i));
    }
  }

  /// Sum of Gaussian splats at projector-plane position (u,v).
  double value(double u, double v) const {
    const double r = 3.0 * sigma_;
    const int cx0 = std::max(0, static_cast<int>((u - r + margin_) / cell_));
    const int cx1 = std::min(nx_ - 1, static_cast<int>((u + r + margin_) / cell_));
    const int cy0 = std::max(0, static_cast<int>((v - r + margin_) / cell_));
    const int cy1 = std::min(ny_ - 1, static_cast<int>((v + r + margin_) / cell_));
    const double inv2s2 = 1.0 / (2.0 * sigma_ * sigma_);
    double acc = 0.0;
    for (int cy = cy0; cy <= cy1; ++cy)
      for (int cx = cx0; cx <= cx1; ++cx)
        for (uint32_t idx : grid_[static_cast<size_t>(cy) * nx_ + cx]) {
          const double du = u - xs_[idx];
          const double dv = v - ys_[idx];
          const double r2 = du * du + dv * dv;
          if (r2 <= r * r) acc += std::exp(-r2 * inv2s2);
        }
    return acc;
  }

 private:
  double sigma_;
  int margin_, w_, h_, cell_, nx_, ny_;
  std::vector<double> xs_, ys_;
  std::vector<std::vector<uint32_t>> grid_;
};

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

/// Trilinear value noise in [0,1] attached to world space, so both views see
/// the same surface texture.
double value_noise3(uint64_t seed, const Vec3& p, double freq) {
  if (freq <= 0.0) return 0.5;
  const double x = p[0] * freq, y = p[1] * freq, z = p[2] * freq;
  const auto fl = [](double v) { return static_cast<int64_t>(std::floor(v)); };
  const int64_t ix = fl(x), iy = fl(y), iz = fl(z);
  const double fx = smoothstep(x - ix), fy = smoothstep(y - iy), fz = smoothstep(z - iz);
  double c[2][2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int cix = 0; cix < 2; ++cix) {
        const uint64_t key = hash_combine(seed ^ kStreamAmbient,
                                          static_cast<uint64_t>(ix + a) * 0x8da6b343ull ^
                                              static_cast<uint64_t>(iy + b) * 0xd8163841ull,
                                          static_cast<uint64_t>(iz + cix) * 0xcb1ab31full);
        c[a][b][cix] = uniform01(key);
      }
  const auto lerp = [](double u, double v, double t) { return u + (v - u) * t; };
  const double v00 = lerp(c[0][0][0], c[1][0][0], fx);
  const double v10 = lerp(c[0][1][0], c[1][1][0], fx);
  const double v01 = lerp(c[0][0][1], c[1][0][1], fx);
  const double v11 = lerp(c[0][1][1], c[1][1][1], fx);
  return lerp(lerp(v00, v10, fy), lerp(v01, v11, fy), fz);
}

}  // namespace

Mask gt_occlusion(const DisparityMap& dl, const DisparityMap& dr, double theta) {
  if (dl.width != dr.width || dl.height != dr.height)
    throw std::invalid_argument("gt_occlusion: size mismatch");
  Mask occ(dl.width, dl.height);
  for (int i = 0; i < dl.height; ++i)
    for (int j = 0; j < dl.width; ++j) {
      if (!dl.is_valid(i, j)) {
        occ.at(i, j) = 1;
        continue;
      }
      const int jr = j - static_cast<int>(std::lround(dl.at(i, j)));
      if (jr < 0 || jr >= dl.width || !dr.is_valid(i, jr) ||
          std::abs(dl.at(i, j) - dr.at(i, jr)) >= theta)
        occ.at(i, j) = 1;
    }
  return occ;
}

RenderedPair render_pair(const SceneSpec& spec, int threads) {
  spec.validate();
  const int w = spec.width, h = spec.height;
  const double f = spec.rig.focal_px, b = spec.rig.baseline_m;
  const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
  const Vec3 proj_pos = {b / 2.0, 0.0, 0.0};

  RenderedPair out;
  out.rig = spec.rig;
  out.seed = spec.seed;
  out.left = Image(w, h);
  out.right = Image(w, h);
  out.noiseless_left = Image(w, h);
  out.noiseless_right = Image(w, h);
  out.gt_disp_left = DisparityMap(w, h);
  out.gt_disp_right = DisparityMap(w, h);

  const DotField dots(spec);

  // view 0 = left camera at origin, view 1 = right camera at (b,0,0)
  for (int view = 0; view < 2; ++view) {
    const Vec3 origin = {view == 0 ? 0.0 : b, 0.0, 0.0};
    Image& noiseless = view == 0 ? out.noiseless_left : out.noiseless_right;
    Image& observed = view == 0 ? out.left : out.right;
    DisparityMap& gt = view == 0 ? out.gt_disp_left : out.gt_disp_right;
    const uint64_t noise_stream = view == 0 ? kStreamLeftNoise : kStreamRightNoise;

    std::vector<int> miss_rows(h, 0);
    parallel_for(h, threads, [&](int i) {
      for (int j = 0; j < w; ++j) {
        const Vec3 dir = {(j - cx) / f, (i - cy) / f, 1.0};
        const Hit hit = intersect(spec, origin, dir);
        if (!hit.ok) {
          miss_rows[i] = 1;
          continue;
        }
        const double z = hit.t;
        const Vec3 p = {origin[0] + z * dir[0], origin[1] + z * dir[1], z};

        gt.at(i, j) = b * f / z;
        gt.valid.at(i, j) = 1;

        double dot_term = 0.0;
        if (spec.dots.gain > 0.0) {
          const double u = (p[0] - proj_pos[0]) / p[2] * f + cx;
          const double v = p[1] / p[2] * f + cy;
          dot_term = dots.value(u, v);
        }
        const double dx = p[0] - proj_pos[0], dy = p[1] - proj_pos[1], dz = p[2];
        const double zp2 = dx * dx + dy * dy + dz * dz;
        const double amb = spec.ambient.amplitude *
                           value_noise3(spec.seed, p, spec.ambient.frequency);
        const double istar = std::clamp(
            hit.albedo * (amb + spec.dots.gain * dot_term * spec.falloff_k / zp2), 0.0, 1.0);
        noiseless.at(i, j) = istar;

        double obs = istar;
        if (spec.noise.sigma1 > 0.0 || spec.noise.sigma2 > 0.0) {
          const double sd = spec.noise.sigma1 * istar + spec.noise.sigma2;
          const uint64_t key =
              hash_combine(spec.seed, noise_stream, static_cast<uint64_t>(i) * w + j);
          obs = std::clamp(istar + sd * normal01(key), 0.0, 1.0);
        }
        observed.at(i, j) = obs;
      }
    });
    for (int i = 0; i < h; ++i)
      if (miss_rows[i])
        throw std::runtime_error("render_pair: a ray missed all geometry (scene not closed)");
  }

  out.occlusion_left = gt_occlusion(out.gt_disp_left, out.gt_disp_right, 0.5);
  return out;
}

}  // namespace deskstereo
