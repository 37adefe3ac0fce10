#include "deskstereo/invalidate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace deskstereo {

namespace {

void check_same(int w1, int h1, int w2, int h2, const char* who) {
  if (w1 != w2 || h1 != h2) throw std::invalid_argument(std::string(who) + ": size mismatch");
}

/// Samples d_right at a real column; returns false when the sample cannot be
/// formed (out of frame or invalid support).
bool sample_right(const DisparityMap& dr, int i, double x, bool bilinear, double* out) {
  if (x < 0.0 || x > dr.width - 1) return false;
  if (!bilinear) {
    const int c = static_cast<int>(std::lround(x));
    if (!dr.is_valid(i, c)) return false;
    *out = dr.at(i, c);
    return true;
  }
  const int c = static_cast<int>(std::floor(x));
  const double a = x - c;
  if (c == dr.width - 1) {
    if (!dr.is_valid(i, c)) return false;
    *out = dr.at(i, c);
    return true;
  }
  if (!dr.is_valid(i, c) || !dr.is_valid(i, c + 1)) return false;
  *out = (1.0 - a) * dr.at(i, c) + a * dr.at(i, c + 1);
  return true;
}

}  // namespace

Mask lr_check(const DisparityMap& dl, const DisparityMap& dr, double theta, bool bilinear) {
  check_same(dl.width, dl.height, dr.width, dr.height, "lr_check");
  if (!(theta > 0.0)) throw std::invalid_argument("lr_check: theta must be > 0");
  Mask valid(dl.width, dl.height);
  for (int i = 0; i < dl.height; ++i)
    for (int j = 0; j < dl.width; ++j) {
      if (!dl.is_valid(i, j)) continue;
      double drv;
      if (!sample_right(dr, i, j - dl.at(i, j), bilinear, &drv)) continue;
      if (std::abs(dl.at(i, j) - drv) < theta) valid.at(i, j) = 1;
    }
  return valid;
}

ConfidenceMap lr_residual_confidence(const DisparityMap& dl, const DisparityMap& dr,
                                     bool bilinear) {
  check_same(dl.width, dl.height, dr.width, dr.height, "lr_residual_confidence");
  ConfidenceMap c(dl.width, dl.height);
  double worst = 0.0;
  std::vector<uint8_t> oob(c.score.size(), 0);
  for (int i = 0; i < dl.height; ++i)
    for (int j = 0; j < dl.width; ++j) {
      const size_t p = static_cast<size_t>(i) * dl.width + j;
      if (!dl.is_valid(i, j)) continue;
      c.valid.data[p] = 1;
      double drv;
      if (sample_right(dr, i, j - dl.at(i, j), bilinear, &drv)) {
        c.score[p] = std::abs(dl.at(i, j) - drv);
        worst = std::max(worst, c.score[p]);
      } else {
        oob[p] = 1;
      }
    }
  for (size_t p = 0; p < c.score.size(); ++p)
    if (oob[p]) c.score[p] = worst + 1.0;
  return c;
}

ConfidenceMap photometric_confidence(const Image& ref, const Image& recon, const Mask& mask) {
  check_same(ref.width, ref.height, recon.width, recon.height, "photometric_confidence");
  check_same(ref.width, ref.height, mask.width, mask.height, "photometric_confidence");
  ConfidenceMap c(ref.width, ref.height);
  for (size_t p = 0; p < ref.size(); ++p) {
    if (!mask.data[p]) continue;
    c.score[p] = std::abs(ref.data[p] - recon.data[p]);
    c.valid.data[p] = 1;
  }
  return c;
}

double mask_ap(const ConfidenceMap& scores, const Mask& gt_positive) {
  check_same(scores.width, scores.height, gt_positive.width, gt_positive.height, "mask_ap");
  std::vector<std::pair<double, uint8_t>> items;
  items.reserve(scores.score.size());
  size_t total_pos = 0;
  for (size_t p = 0; p < scores.score.size(); ++p) {
    if (!scores.valid.data[p]) continue;
    const uint8_t pos = gt_positive.data[p] ? 1 : 0;
    total_pos += pos;
    items.emplace_back(scores.score[p], pos);
  }
  if (total_pos == 0) throw std::invalid_argument("mask_ap: no positive ground-truth pixels");

  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  // Sweep distinct thresholds; equal scores enter the positive set together.
  double ap = 0.0;
  size_t tp = 0, seen = 0, i = 0;
  double prev_recall = 0.0;
  const size_t n = items.size();
  while (i < n) {
    size_t j = i;
    size_t tp_group = 0;
    while (j < n && items[j].first == items[i].first) {
      tp_group += items[j].second;
      ++j;
    }
    seen += j - i;
    tp += tp_group;
    const double recall = static_cast<double>(tp) / total_pos;
    const double precision = static_cast<double>(tp) / seen;
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
    i = j;
  }
  return ap;
}

}  // namespace deskstereo
