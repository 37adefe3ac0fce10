#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace deskstereo {

/// Dense single-channel image, row-major, double precision.
/// Intensities are nominally in [0,1] but the container does not enforce it.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("Image: empty size");
  }

  double& at(int i, int j) { return data[static_cast<size_t>(i) * width + j]; }
  double at(int i, int j) const { return data[static_cast<size_t>(i) * width + j]; }

  bool in_bounds(int i, int j) const {
    return i >= 0 && i < height && j >= 0 && j < width;
  }
  bool same_size(const Image& o) const {
    return width == o.width && height == o.height;
  }
  size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
};

/// Binary per-pixel mask (1 = set). Same layout as Image.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> data;

  Mask() = default;
  Mask(int w, int h, uint8_t fill = 0)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  uint8_t& at(int i, int j) { return data[static_cast<size_t>(i) * width + j]; }
  uint8_t at(int i, int j) const { return data[static_cast<size_t>(i) * width + j]; }
  size_t count() const;
};

/// Per-pixel real-valued disparity (pixels) with a validity mask.
/// Convention: left image is reference; a point at column j in the left view
/// appears at column j-d in the right view, d >= 0.
struct DisparityMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;
  Mask valid;

  DisparityMap() = default;
  DisparityMap(int w, int h, double fill = 0.0, uint8_t v = 0)
      : width(w), height(h), values(static_cast<size_t>(w) * h, fill), valid(w, h, v) {}

  double& at(int i, int j) { return values[static_cast<size_t>(i) * width + j]; }
  double at(int i, int j) const { return values[static_cast<size_t>(i) * width + j]; }
  bool is_valid(int i, int j) const { return valid.at(i, j) != 0; }
};

Image flip_horizontal(const Image& img);
Mask flip_horizontal(const Mask& m);
DisparityMap flip_horizontal(const DisparityMap& d);

}  // namespace deskstereo
