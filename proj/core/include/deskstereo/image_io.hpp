#pragma once

#include <string>

#include "deskstereo/image.hpp"

namespace deskstereo {

// PFM: grayscale "Pf", little-endian (scale header -1.0), rows bottom-up.
// Pixel data is stored as float32; the in-memory Image is double.
void write_pfm(const std::string& path, const Image& img);
Image read_pfm(const std::string& path);

/// 8-bit binary PGM, values linearly clamped from [0,1] to 0..255.
void write_pgm(const std::string& path, const Image& img);
/// Mask as 0/255 PGM.
void write_pgm(const std::string& path, const Mask& mask);
Image read_pgm(const std::string& path);
/// Nonzero PGM pixels become mask 1.
Mask read_pgm_mask(const std::string& path);

}  // namespace deskstereo
