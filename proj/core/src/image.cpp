#include "deskstereo/image.hpp"

#include <numeric>

namespace deskstereo {

size_t Mask::count() const {
  size_t n = 0;
  for (uint8_t v : data) n += (v != 0);
  return n;
}

Image flip_horizontal(const Image& img) {
  Image out(img.width, img.height);
  for (int i = 0; i < img.height; ++i)
    for (int j = 0; j < img.width; ++j)
      out.at(i, j) = img.at(i, img.width - 1 - j);
  return out;
}

Mask flip_horizontal(const Mask& m) {
  Mask out(m.width, m.height);
  for (int i = 0; i < m.height; ++i)
    for (int j = 0; j < m.width; ++j)
      out.at(i, j) = m.at(i, m.width - 1 - j);
  return out;
}

DisparityMap flip_horizontal(const DisparityMap& d) {
  DisparityMap out(d.width, d.height);
  for (int i = 0; i < d.height; ++i)
    for (int j = 0; j < d.width; ++j) {
      out.at(i, j) = d.at(i, d.width - 1 - j);
      out.valid.at(i, j) = d.valid.at(i, d.width - 1 - j);
    }
  return out;
}

}  // namespace deskstereo
