#include "deskstereo/cost_volume.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "deskstereo/parallel.hpp"

namespace deskstereo {

namespace {

void fill_raw_planes(CostVolume& vol, const Image& ref, const Image& mov,
                     const Image* sigma_ref, int threads) {
  const int w = vol.width, D = vol.planes(), d_min = vol.d_min;
  parallel_for(vol.height, threads, [&](int i) {
    const double* rrow = &ref.data[static_cast<size_t>(i) * w];
    const double* mrow = &mov.data[static_cast<size_t>(i) * w];
    const double* srow = sigma_ref ? &sigma_ref->data[static_cast<size_t>(i) * w] : nullptr;
    for (int j = 0; j < w; ++j) {
      double* c = &vol.cost[(static_cast<size_t>(i) * w + j) * D];
      uint8_t* v = &vol.valid[(static_cast<size_t>(i) * w + j) * D];
      const int n = std::min(D, j - d_min + 1);  // planes with j-d in frame
      const double scale = srow ? srow[j] : 1.0;
      for (int dd = 0; dd < n; ++dd) {
        c[dd] = scale * std::abs(rrow[j] - mrow[j - d_min - dd]);
        v[dd] = 1;
      }
    }
  });
}

// Fused ASW over all planes of a volume. Weights and per-plane denominators
// depend only on the guide and the column-validity rule (cell valid for plane
// d iff its column y >= d), so each window cell is visited once and its cost
// vector accumulated with a single weight.
CostVolume asw_aggregate_volume(const CostVolume& raw, const Image& guide, int k,
                                double sigma_w, int threads) {
  const int w = raw.width, h = raw.height, D = raw.planes(), d_min = raw.d_min;
  CostVolume out(raw.d_min, raw.d_max, w, h);

  std::vector<double> up(guide.size()), un(guide.size());
  for (size_t p = 0; p < guide.size(); ++p) {
    up[p] = std::exp(guide.data[p] / sigma_w);
    un[p] = std::exp(-guide.data[p] / sigma_w);
  }

  parallel_for(h, threads, [&](int i) {
    std::vector<double> num(D), colw(2 * k), dencum(2 * k + 1);
    const int x0 = std::max(0, i - k);
    const int x1 = std::min(h - 1, i + k - 1);
    for (int j = 0; j < w; ++j) {
      const int y0 = std::max(0, j - k);
      const int y1 = std::min(w - 1, j + k - 1);
      const int ncols = y1 - y0 + 1;
      const size_t pc = static_cast<size_t>(i) * w + j;
      const double uc = up[pc], vc = un[pc];
      std::fill(num.begin(), num.end(), 0.0);
      std::fill(colw.begin(), colw.begin() + ncols, 0.0);
      for (int x = x0; x <= x1; ++x) {
        const size_t rowbase = static_cast<size_t>(x) * w;
        for (int y = y0; y <= y1; ++y) {
          const size_t p = rowbase + y;
          const double wgt = std::min(uc * un[p], vc * up[p]);
          colw[y - y0] += wgt;
          const double* cp = &raw.cost[p * D];
          for (int dd = 0; dd < D; ++dd) num[dd] += wgt * cp[dd];
        }
      }
      // den(d) = sum of column weights over window columns y >= d
      dencum[ncols] = 0.0;
      for (int y = ncols - 1; y >= 0; --y) dencum[y] = dencum[y + 1] + colw[y];
      double* oc = &out.cost[pc * D];
      uint8_t* ov = &out.valid[pc * D];
      for (int dd = 0; dd < D; ++dd) {
        const int d = d_min + dd;
        if (d > j) break;  // center cannot carry an out-of-frame disparity
        const int yfirst = std::max(y0, d);
        if (yfirst > y1) continue;
        const double den = dencum[yfirst - y0];
        if (den > 0.0) {
          oc[dd] = num[dd] / den;
          ov[dd] = 1;
        }
      }
    }
  });
  return out;
}

}  // namespace

CostVolume build_volume(const Image& left, const Image& right, int d_min,
                        int d_max, const VolumeConfig& cfg, int threads) {
  if (!left.same_size(right)) throw std::invalid_argument("build_volume: size mismatch");
  if (d_min < 0 || d_max <= d_min) throw std::invalid_argument("build_volume: invalid disparity range");

  CostVolume vol(d_min, d_max, left.width, left.height);
  if (cfg.cost == CostKind::Wlcn) {
    LcnResult ln = lcn_normalize(left, cfg.lcn_eta, cfg.lcn_radius, threads);
    LcnResult rn = lcn_normalize(right, cfg.lcn_eta, cfg.lcn_radius, threads);
    fill_raw_planes(vol, ln.normalized, rn.normalized, &ln.stats.sigma, threads);
  } else {
    fill_raw_planes(vol, left, right, nullptr, threads);
  }
  if (cfg.use_asw) {
    const double sw = sigma_w_from_8bit(cfg.asw.sigma_w_8bit);
    vol = asw_aggregate_volume(vol, left, cfg.asw.k, sw, threads);
  }
  return vol;
}

DisparityMap soft_argmin(const CostVolume& vol, double temperature, int threads) {
  if (!(temperature > 0.0)) throw std::invalid_argument("soft_argmin: temperature must be > 0");
  const int w = vol.width, D = vol.planes();
  DisparityMap out(w, vol.height);
  parallel_for(vol.height, threads, [&](int i) {
    for (int j = 0; j < w; ++j) {
      const size_t base = (static_cast<size_t>(i) * w + j) * D;
      double m = 0.0;
      bool any = false;
      for (int dd = 0; dd < D; ++dd)
        if (vol.valid[base + dd] && (!any || vol.cost[base + dd] < m)) {
          m = vol.cost[base + dd];
          any = true;
        }
      if (!any) continue;
      double sp = 0.0, sdp = 0.0;
      for (int dd = 0; dd < D; ++dd) {
        if (!vol.valid[base + dd]) continue;
        const double p = std::exp(-(vol.cost[base + dd] - m) / temperature);
        sp += p;
        sdp += (vol.d_min + dd) * p;
      }
      out.at(i, j) = sdp / sp;
      out.valid.at(i, j) = 1;
    }
  });
  return out;
}

CostVolume soft_argmin_grad(const CostVolume& vol, double temperature, int threads) {
  if (!(temperature > 0.0)) throw std::invalid_argument("soft_argmin_grad: temperature must be > 0");
  const int w = vol.width, D = vol.planes();
  CostVolume g(vol.d_min, vol.d_max, w, vol.height);
  DisparityMap dstar = soft_argmin(vol, temperature, threads);
  parallel_for(vol.height, threads, [&](int i) {
    for (int j = 0; j < w; ++j) {
      if (!dstar.is_valid(i, j)) continue;
      const size_t base = (static_cast<size_t>(i) * w + j) * D;
      double m = 0.0;
      bool first = true;
      for (int dd = 0; dd < D; ++dd)
        if (vol.valid[base + dd] && (first || vol.cost[base + dd] < m)) {
          m = vol.cost[base + dd];
          first = false;
        }
      double sp = 0.0;
      for (int dd = 0; dd < D; ++dd)
        if (vol.valid[base + dd]) sp += std::exp(-(vol.cost[base + dd] - m) / temperature);
      const double ds = dstar.at(i, j);
      for (int dd = 0; dd < D; ++dd) {
        if (!vol.valid[base + dd]) continue;
        const double p = std::exp(-(vol.cost[base + dd] - m) / temperature) / sp;
        g.cost[base + dd] = -(1.0 / temperature) * p * ((vol.d_min + dd) - ds);
        g.valid[base + dd] = 1;
      }
    }
  });
  return g;
}

DisparityMap wta_subpixel(const CostVolume& vol, int threads) {
  const int w = vol.width, D = vol.planes();
  DisparityMap out(w, vol.height);
  parallel_for(vol.height, threads, [&](int i) {
    for (int j = 0; j < w; ++j) {
      const size_t base = (static_cast<size_t>(i) * w + j) * D;
      int best = -1;
      for (int dd = 0; dd < D; ++dd)
        if (vol.valid[base + dd] && (best < 0 || vol.cost[base + dd] < vol.cost[base + best]))
          best = dd;
      if (best < 0) continue;
      double d = vol.d_min + best;
      if (best > 0 && best < D - 1 && vol.valid[base + best - 1] && vol.valid[base + best + 1]) {
        const double cm = vol.cost[base + best - 1];
        const double c0 = vol.cost[base + best];
        const double cp = vol.cost[base + best + 1];
        const double denom = cm - 2.0 * c0 + cp;
        if (denom > 0.0) d += std::clamp((cm - cp) / (2.0 * denom), -0.5, 0.5);
      }
      out.at(i, j) = d;
      out.valid.at(i, j) = 1;
    }
  });
  return out;
}

std::vector<LandscapeSample> landscape(const CostVolume& vol, int i, int j) {
  if (i < 0 || i >= vol.height || j < 0 || j >= vol.width)
    throw std::out_of_range("landscape: pixel out of range");
  std::vector<LandscapeSample> curve(vol.planes());
  for (int dd = 0; dd < vol.planes(); ++dd) {
    curve[dd].d = vol.d_min + dd;
    curve[dd].cost = vol.at(i, j, vol.d_min + dd);
    curve[dd].valid = vol.is_valid(i, j, vol.d_min + dd);
  }
  return curve;
}

}  // namespace deskstereo
