#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "deskstereo/matcher.hpp"
#include "deskstereo/parallel.hpp"
#include "deskstereo/warp.hpp"

namespace deskstereo {

namespace {

struct Objective {
  double value = 0.0;
  // dE/dC per pixel: the summed normalized window weight of each cell over
  // all aggregation centers that include it (1 when aggregation is off).
  std::vector<double> backprop_weight;
};

double huber(double x, double delta) {
  const double a = std::abs(x);
  return a <= delta ? 0.5 * x * x : delta * (a - 0.5 * delta);
}

double huber_grad(double x, double delta) { return std::clamp(x, -delta, delta); }

// Data objective + dE/dC. Weights w depend on the guide image only, so they
// are exact constants with respect to the disparity field.
Objective data_objective(const CostMap& c, const Image& guide, bool use_asw, int k,
                         double sigma_w, int threads) {
  const int w = c.width, h = c.height;
  Objective obj;
  obj.backprop_weight.assign(c.cost.size(), 0.0);

  if (!use_asw) {
    double total = 0.0;
    for (size_t p = 0; p < c.cost.size(); ++p)
      if (c.valid.data[p]) {
        total += c.cost[p];
        obj.backprop_weight[p] = 1.0;
      }
    obj.value = total;
    return obj;
  }

  std::vector<double> up(guide.size()), un(guide.size());
  for (size_t p = 0; p < guide.size(); ++p) {
    up[p] = std::exp(guide.data[p] / sigma_w);
    un[p] = std::exp(-guide.data[p] / sigma_w);
  }

  // pass 1: per-center denominator and aggregated cost
  std::vector<double> den(c.cost.size(), 0.0);
  std::vector<double> row_sums(h, 0.0);
  parallel_for(h, threads, [&](int i) {
    const int x0 = std::max(0, i - k), x1 = std::min(h - 1, i + k - 1);
    double rsum = 0.0;
    for (int j = 0; j < w; ++j) {
      const int y0 = std::max(0, j - k), y1 = std::min(w - 1, j + k - 1);
      const size_t pc = static_cast<size_t>(i) * w + j;
      const double uc = up[pc], vc = un[pc];
      double num = 0.0, d = 0.0;
      for (int x = x0; x <= x1; ++x)
        for (int y = y0; y <= y1; ++y) {
          const size_t p = static_cast<size_t>(x) * w + y;
          if (!c.valid.data[p]) continue;
          const double wgt = std::min(uc * un[p], vc * up[p]);
          num += wgt * c.cost[p];
          d += wgt;
        }
      den[pc] = d;
      if (d > 0.0) rsum += num / d;
    }
    row_sums[i] = rsum;
  });
  for (int i = 0; i < h; ++i) obj.value += row_sums[i];

  // pass 2: gather dE/dC per cell over the centers whose window contains it
  parallel_for(h, threads, [&](int x) {
    const int i0 = std::max(0, x - k + 1), i1 = std::min(h - 1, x + k);
    for (int y = 0; y < w; ++y) {
      const size_t p = static_cast<size_t>(x) * w + y;
      if (!c.valid.data[p]) continue;
      const int j0 = std::max(0, y - k + 1), j1 = std::min(w - 1, y + k);
      double acc = 0.0;
      for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) {
          const size_t pc = static_cast<size_t>(i) * w + j;
          if (den[pc] <= 0.0) continue;
          acc += std::min(up[pc] * un[p], un[pc] * up[p]) / den[pc];
        }
      obj.backprop_weight[p] = acc;
    }
  });
  return obj;
}

}  // namespace

RefineResult refine_gd(const Image& left, const Image& right,
                       const DisparityMap& d_init, const MatchConfig& cfg,
                       int threads) {
  cfg.validate();
  if (!left.same_size(right) || d_init.width != left.width || d_init.height != left.height)
    throw std::invalid_argument("refine_gd: size mismatch");
  if (d_init.valid.count() == 0)
    throw std::invalid_argument("refine_gd: d_init has no valid pixels");

  const int w = left.width, h = left.height;
  const bool wlcn = cfg.volume.cost == CostKind::Wlcn;
  const double sigma_w = sigma_w_from_8bit(cfg.volume.asw.sigma_w_8bit);

  // LCN stats are inputs, computed once and held fixed.
  Image ref = left, mov = right, weight(w, h, 1.0);
  if (wlcn) {
    LcnResult ln = lcn_normalize(left, cfg.volume.lcn_eta, cfg.volume.lcn_radius, threads);
    LcnResult rn = lcn_normalize(right, cfg.volume.lcn_eta, cfg.volume.lcn_radius, threads);
    ref = std::move(ln.normalized);
    mov = std::move(rn.normalized);
    weight = std::move(ln.stats.sigma);
  }

  const auto evaluate = [&](const DisparityMap& d, int k_it, Objective* obj,
                            CostMap* cost_out, WarpResult* warp_out) {
    WarpResult wr = warp_scanline(mov, d, threads);
    CostMap c(w, h);
    for (size_t p = 0; p < c.cost.size(); ++p) {
      if (!wr.valid.data[p]) continue;
      c.cost[p] = (wlcn ? weight.data[p] : 1.0) * std::abs(ref.data[p] - wr.image.data[p]);
      c.valid.data[p] = 1;
    }
    *obj = data_objective(c, left, cfg.volume.use_asw, k_it, sigma_w, threads);
    if (cfg.refine.lambda > 0.0) {
      double s = 0.0;
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) {
          if (!d.is_valid(i, j)) continue;
          if (j + 1 < w && d.is_valid(i, j + 1))
            s += huber(d.at(i, j + 1) - d.at(i, j), cfg.refine.huber_delta);
          if (i + 1 < h && d.is_valid(i + 1, j))
            s += huber(d.at(i + 1, j) - d.at(i, j), cfg.refine.huber_delta);
        }
      obj->value += cfg.refine.lambda * s;
    }
    if (cost_out) *cost_out = std::move(c);
    if (warp_out) *warp_out = std::move(wr);
  };

  RefineResult res;
  DisparityMap d = d_init;
  DisparityMap best = d_init;
  double best_obj = 0.0;
  int rising = 0;
  double prev_obj = 0.0;

  for (int it = 0; it <= cfg.refine.steps; ++it) {
    int k_it = cfg.volume.asw.k;
    if (cfg.refine.schedule)
      k_it = std::max(1, cfg.refine.k_start >> (cfg.refine.halve_every > 0
                                                    ? it / cfg.refine.halve_every
                                                    : 0));

    Objective obj;
    CostMap c;
    WarpResult wr;
    evaluate(d, k_it, &obj, &c, &wr);
    res.objective_trace.push_back(obj.value);
    if (it == 0 || obj.value < best_obj) {
      best_obj = obj.value;
      best = d;
    }
    if (it > 0 && obj.value > prev_obj) {
      if (++rising >= 20) break;
    } else {
      rising = 0;
    }
    prev_obj = obj.value;
    if (it == cfg.refine.steps) break;

    Image g = warp_grad(mov, d, threads);
    Image grad_field(w, h);  // gradient from the pre-update iterate
    parallel_for(h, threads, [&](int i) {
      for (int j = 0; j < w; ++j) {
        if (!d.is_valid(i, j)) continue;
        const size_t p = static_cast<size_t>(i) * w + j;
        double grad = 0.0;
        if (c.valid.data[p]) {
          const double r = ref.data[p] - wr.image.data[p];
          const double sgn = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
          grad = obj.backprop_weight[p] * (wlcn ? weight.data[p] : 1.0) * sgn * (-g.data[p]);
        }
        if (cfg.refine.lambda > 0.0) {
          double sg = 0.0;
          if (j + 1 < w && d.is_valid(i, j + 1))
            sg -= huber_grad(d.at(i, j + 1) - d.at(i, j), cfg.refine.huber_delta);
          if (j > 0 && d.is_valid(i, j - 1))
            sg += huber_grad(d.at(i, j) - d.at(i, j - 1), cfg.refine.huber_delta);
          if (i + 1 < h && d.is_valid(i + 1, j))
            sg -= huber_grad(d.at(i + 1, j) - d.at(i, j), cfg.refine.huber_delta);
          if (i > 0 && d.is_valid(i - 1, j))
            sg += huber_grad(d.at(i, j) - d.at(i - 1, j), cfg.refine.huber_delta);
          grad += cfg.refine.lambda * sg;
        }
        grad_field.at(i, j) = grad;
      }
    });
    parallel_for(h, threads, [&](int i) {
      for (int j = 0; j < w; ++j)
        if (d.is_valid(i, j))
          d.at(i, j) = std::max(0.0, d.at(i, j) - cfg.refine.learning_rate * grad_field.at(i, j));
    });
  }

  res.disparity = std::move(best);
  res.best_objective = best_obj;
  return res;
}

}  // namespace deskstereo
