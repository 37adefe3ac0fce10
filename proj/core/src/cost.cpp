#include "deskstereo/cost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "deskstereo/parallel.hpp"

namespace deskstereo {

namespace {
void check_same(int w1, int h1, int w2, int h2, const char* who) {
  if (w1 != w2 || h1 != h2) throw std::invalid_argument(std::string(who) + ": size mismatch");
}
}  // namespace

CostMap photometric_cost(const Image& ref, const Image& recon, const Mask& mask) {
  check_same(ref.width, ref.height, recon.width, recon.height, "photometric_cost");
  check_same(ref.width, ref.height, mask.width, mask.height, "photometric_cost");
  CostMap c(ref.width, ref.height);
  for (size_t p = 0; p < ref.size(); ++p) {
    if (!mask.data[p]) continue;
    c.cost[p] = std::abs(ref.data[p] - recon.data[p]);
    c.valid.data[p] = 1;
  }
  return c;
}

CostMap wlcn_cost(const Image& ref_lcn, const Image& recon_lcn,
                  const Image& sigma_ref, const Mask& mask) {
  check_same(ref_lcn.width, ref_lcn.height, recon_lcn.width, recon_lcn.height, "wlcn_cost");
  check_same(ref_lcn.width, ref_lcn.height, sigma_ref.width, sigma_ref.height, "wlcn_cost");
  check_same(ref_lcn.width, ref_lcn.height, mask.width, mask.height, "wlcn_cost");
  CostMap c(ref_lcn.width, ref_lcn.height);
  for (size_t p = 0; p < ref_lcn.size(); ++p) {
    if (!mask.data[p]) continue;
    c.cost[p] = sigma_ref.data[p] * std::abs(ref_lcn.data[p] - recon_lcn.data[p]);
    c.valid.data[p] = 1;
  }
  return c;
}

CostMap asw_aggregate(const CostMap& costs, const Image& guide, int k,
                      double sigma_w, int threads) {
  check_same(costs.width, costs.height, guide.width, guide.height, "asw_aggregate");
  if (k < 1) throw std::invalid_argument("asw_aggregate: k must be >= 1");
  if (!(sigma_w > 0.0)) throw std::invalid_argument("asw_aggregate: sigma_w must be > 0");

  const int w = costs.width, h = costs.height;
  CostMap out(w, h);

  // exp(-|a-b|/s) == min(e^{(a-b)/s}, e^{(b-a)/s}); precomputing e^{+/-g/s}
  // per pixel turns the kernel into two mults and a min.
  std::vector<double> up(guide.size()), un(guide.size());
  for (size_t p = 0; p < guide.size(); ++p) {
    up[p] = std::exp(guide.data[p] / sigma_w);
    un[p] = std::exp(-guide.data[p] / sigma_w);
  }

  parallel_for(h, threads, [&](int i) {
    const int x0 = std::max(0, i - k);
    const int x1 = std::min(h - 1, i + k - 1);
    for (int j = 0; j < w; ++j) {
      const int y0 = std::max(0, j - k);
      const int y1 = std::min(w - 1, j + k - 1);
      const size_t pc = static_cast<size_t>(i) * w + j;
      const double uc = up[pc], vc = un[pc];
      double num = 0.0, den = 0.0;
      for (int x = x0; x <= x1; ++x) {
        const size_t base = static_cast<size_t>(x) * w;
        for (int y = y0; y <= y1; ++y) {
          const size_t p = base + y;
          if (!costs.valid.data[p]) continue;
          const double wgt = std::min(uc * un[p], vc * up[p]);
          num += wgt * costs.cost[p];
          den += wgt;
        }
      }
      if (den > 0.0) {
        out.cost[pc] = num / den;
        out.valid.data[pc] = 1;
      }
    }
  });
  return out;
}

}  // namespace deskstereo
