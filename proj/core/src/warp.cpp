#include "deskstereo/warp.hpp"

#include <cmath>
#include <stdexcept>

#include "deskstereo/parallel.hpp"

namespace deskstereo {

namespace {
void check_sizes(const Image& src, const DisparityMap& disp, const char* who) {
  if (src.width != disp.width || src.height != disp.height)
    throw std::invalid_argument(std::string(who) + ": size mismatch");
}
}  // namespace

WarpResult warp_scanline(const Image& source, const DisparityMap& disparity,
                         int threads) {
  check_sizes(source, disparity, "warp_scanline");
  WarpResult r;
  r.image = Image(source.width, source.height);
  r.valid = Mask(source.width, source.height);
  const int w = source.width;
  parallel_for(source.height, threads, [&](int i) {
    const double* row = &source.data[static_cast<size_t>(i) * w];
    for (int j = 0; j < w; ++j) {
      if (!disparity.is_valid(i, j)) continue;
      const double x = j - disparity.at(i, j);
      if (x < 0.0 || x > w - 1) continue;
      const int c = static_cast<int>(std::floor(x));
      const double a = x - c;
      r.image.at(i, j) = (c == w - 1) ? row[c] : (1.0 - a) * row[c] + a * row[c + 1];
      r.valid.at(i, j) = 1;
    }
  });
  return r;
}

Image warp_grad(const Image& source, const DisparityMap& disparity, int threads) {
  check_sizes(source, disparity, "warp_grad");
  Image g(source.width, source.height);
  const int w = source.width;
  parallel_for(source.height, threads, [&](int i) {
    const double* row = &source.data[static_cast<size_t>(i) * w];
    for (int j = 0; j < w; ++j) {
      if (!disparity.is_valid(i, j)) continue;
      const double x = j - disparity.at(i, j);
      if (x < 0.0 || x > w - 1) continue;
      const int c = static_cast<int>(std::floor(x));
      if (c >= w - 1) continue;  // no right neighbor for the cell slope
      g.at(i, j) = -(row[c + 1] - row[c]);
    }
  });
  return g;
}

}  // namespace deskstereo
