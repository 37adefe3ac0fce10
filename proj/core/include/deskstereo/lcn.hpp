#pragma once

#include "deskstereo/image.hpp"

namespace deskstereo {

/// Windowed per-pixel statistics. sigma is the population standard deviation.
struct LocalStats {
  Image mu;
  Image sigma;
  int radius = 0;
};

/// Per-pixel mean and population std over a (2r+1)^2 window.
/// The window shrinks to its in-bounds portion near borders (no padding).
LocalStats local_stats(const Image& img, int radius, int threads = 0);

struct LcnResult {
  Image normalized;
  LocalStats stats;
};

/// Local contrast normalization: (I - mu) / (sigma + eta).
LcnResult lcn_normalize(const Image& img, double eta, int radius, int threads = 0);

constexpr int kLcnDefaultRadius = 4;   // 9x9 window
constexpr double kLcnDefaultEta = 1e-3;

}  // namespace deskstereo
