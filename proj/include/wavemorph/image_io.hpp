#pragma once

#include "wavemorph/plane.hpp"

#include <filesystem>

namespace wavemorph {

/// Greyscale P5 (8- or 16-bit) or P2. Pixels are scaled by 1/maxval.
Image read_pgm(const std::filesystem::path& path);
/// 8-bit P5; values are clamped to [0,1] and rounded to the nearest level.
void write_pgm(const std::filesystem::path& path, const Image& img);

/// Grey, grey+alpha, RGB or RGBA; colour is reduced to Rec. 601 luminance.
Image read_png(const std::filesystem::path& path);
/// 8-bit greyscale PNG.
void write_png(const std::filesystem::path& path, const Image& img);

/// Dispatches on the extension (.pgm, .png). Throws InputError for others.
Image read_image(const std::filesystem::path& path);
bool is_supported_image(const std::filesystem::path& path);

inline double rec601_luma(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

/// Bilinear resampling with pixel-centre alignment and edge clamping.
Image resize_bilinear(const Image& img, std::size_t width, std::size_t height);

} // namespace wavemorph
