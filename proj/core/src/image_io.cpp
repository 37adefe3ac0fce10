#include "deskstereo/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace deskstereo {

namespace {

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

void skip_ws_comments(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

}  // namespace

void write_pfm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail(path, "cannot open for writing");
  out << "Pf\n" << img.width << " " << img.height << "\n-1.0\n";
  // bottom row first
  std::vector<float> row(img.width);
  for (int i = img.height - 1; i >= 0; --i) {
    for (int j = 0; j < img.width; ++j) row[j] = static_cast<float>(img.at(i, j));
    out.write(reinterpret_cast<const char*>(row.data()), sizeof(float) * row.size());
  }
  if (!out) io_fail(path, "write failed");
}

Image read_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open");
  std::string magic;
  in >> magic;
  if (magic != "Pf") io_fail(path, "not a grayscale PFM");
  int w = 0, h = 0;
  double scale = 0;
  in >> w >> h >> scale;
  if (!in || w <= 0 || h <= 0 || scale == 0) io_fail(path, "malformed PFM header");
  if (scale > 0) io_fail(path, "big-endian PFM not supported");
  in.get();  // single whitespace after scale
  Image img(w, h);
  std::vector<float> row(w);
  for (int i = h - 1; i >= 0; --i) {
    in.read(reinterpret_cast<char*>(row.data()), sizeof(float) * row.size());
    if (!in) io_fail(path, "truncated PFM data");
    for (int j = 0; j < w; ++j) img.at(i, j) = row[j];
  }
  return img;
}

void write_pgm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail(path, "cannot open for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<uint8_t> row(img.width);
  for (int i = 0; i < img.height; ++i) {
    for (int j = 0; j < img.width; ++j) {
      double v = std::clamp(img.at(i, j), 0.0, 1.0);
      row[j] = static_cast<uint8_t>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) io_fail(path, "write failed");
}

void write_pgm(const std::string& path, const Mask& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail(path, "cannot open for writing");
  out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  std::vector<uint8_t> row(mask.width);
  for (int i = 0; i < mask.height; ++i) {
    for (int j = 0; j < mask.width; ++j) row[j] = mask.at(i, j) ? 255 : 0;
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) io_fail(path, "write failed");
}

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open");
  std::string magic;
  in >> magic;
  if (magic != "P5") io_fail(path, "not a binary PGM");
  skip_ws_comments(in);
  int w = 0, h = 0, maxv = 0;
  in >> w;
  skip_ws_comments(in);
  in >> h;
  skip_ws_comments(in);
  in >> maxv;
  if (!in || w <= 0 || h <= 0 || maxv <= 0 || maxv > 255)
    io_fail(path, "malformed PGM header");
  in.get();
  Image img(w, h);
  std::vector<uint8_t> row(w);
  for (int i = 0; i < h; ++i) {
    in.read(reinterpret_cast<char*>(row.data()), row.size());
    if (!in) io_fail(path, "truncated PGM data");
    for (int j = 0; j < w; ++j) img.at(i, j) = row[j] / static_cast<double>(maxv);
  }
  return img;
}

Mask read_pgm_mask(const std::string& path) {
  Image img = read_pgm(path);
  Mask m(img.width, img.height);
  for (size_t p = 0; p < img.size(); ++p) m.data[p] = img.data[p] > 0 ? 1 : 0;
  return m;
}

}  // namespace deskstereo
