#include "deskstereo/lcn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "deskstereo/parallel.hpp"

namespace deskstereo {

LocalStats local_stats(const Image& img, int radius, int threads) {
  if (img.empty()) throw std::invalid_argument("local_stats: empty image");
  if (radius < 1) throw std::invalid_argument("local_stats: radius must be >= 1");

  LocalStats st;
  st.mu = Image(img.width, img.height);
  st.sigma = Image(img.width, img.height);
  st.radius = radius;

  const int w = img.width, h = img.height;
  parallel_for(h, threads, [&](int i) {
    const int x0 = std::max(0, i - radius);
    const int x1 = std::min(h - 1, i + radius);
    for (int j = 0; j < w; ++j) {
      const int y0 = std::max(0, j - radius);
      const int y1 = std::min(w - 1, j + radius);
      double sum = 0.0, sum2 = 0.0;
      for (int x = x0; x <= x1; ++x) {
        const double* row = &img.data[static_cast<size_t>(x) * w];
        for (int y = y0; y <= y1; ++y) {
          const double v = row[y];
          sum += v;
          sum2 += v * v;
        }
      }
      const double n = static_cast<double>((x1 - x0 + 1) * (y1 - y0 + 1));
      const double mu = sum / n;
      const double var = std::max(0.0, sum2 / n - mu * mu);
      st.mu.at(i, j) = mu;
      st.sigma.at(i, j) = std::sqrt(var);
    }
  });
  return st;
}

LcnResult lcn_normalize(const Image& img, double eta, int radius, int threads) {
  if (!(eta > 0.0)) throw std::invalid_argument("lcn_normalize: eta must be > 0");
  LcnResult r;
  r.stats = local_stats(img, radius, threads);
  r.normalized = Image(img.width, img.height);
  const int w = img.width;
  parallel_for(img.height, threads, [&](int i) {
    for (int j = 0; j < w; ++j)
      r.normalized.at(i, j) =
          (img.at(i, j) - r.stats.mu.at(i, j)) / (r.stats.sigma.at(i, j) + eta);
  });
  return r;
}

}  // namespace deskstereo
