#pragma once

#include "wavemorph/labels.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace wavemorph {

/// Row-major single-channel matrix of doubles.
///
/// Used both for input images (luminance in [0,1]) and for wavelet
/// coefficient planes, which are unbounded.
class Plane {
public:
  Plane() = default;
  Plane(std::size_t width, std::size_t height, double fill = 0.0);
  Plane(std::size_t width, std::size_t height, std::vector<double> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& at(std::size_t row, std::size_t col) noexcept { return data_[row * width_ + col]; }
  double at(std::size_t row, std::size_t col) const noexcept { return data_[row * width_ + col]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * width_, width_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * width_, width_};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool same_shape(const Plane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Plane&, const Plane&) = default;

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

/// Inputs to the transform: Plane with values in [0,1].
using Image = Plane;

inline constexpr std::size_t kMinImageSide = 8;

/// Throws InputError unless the image is at least 8x8, finite, and in [0,1].
void validate_image(const Image& img);

/// Circular shift: out(r, c) = in((r - dy) mod H, (c - dx) mod W).
Plane circular_shift(const Plane& in, long dy, long dx);

double max_abs_difference(const Plane& a, const Plane& b);

} // namespace wavemorph
