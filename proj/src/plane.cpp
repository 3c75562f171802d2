#include "wavemorph/plane.hpp"

#include "wavemorph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wavemorph {

std::string_view to_string(ClassLabel label) {
  return label == ClassLabel::bonafide ? "bonafide" : "morphed";
}

ClassLabel parse_label(std::string_view text) {
  if (text == "bonafide") return ClassLabel::bonafide;
  if (text == "morphed") return ClassLabel::morphed;
  throw InputError("unknown class label '" + std::string(text) + "'");
}

std::string_view to_string(Split split) {
  switch (split) {
  case Split::train: return "train";
  case Split::validation: return "validation";
  case Split::test: return "test";
  }
  return "?";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::train;
  if (text == "validation") return Split::validation;
  if (text == "test") return Split::test;
  throw InputError("unknown split '" + std::string(text) + "'");
}

Plane::Plane(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {}

Plane::Plane(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (data_.size() != width * height)
    throw InputError("plane data length " + std::to_string(data_.size()) + " != " +
                     std::to_string(width) + "x" + std::to_string(height));
}

void validate_image(const Image& img) {
  if (img.width() < kMinImageSide || img.height() < kMinImageSide)
    throw InputError("image is " + std::to_string(img.width()) + "x" +
                     std::to_string(img.height()) + ", minimum is 8x8");
  for (double v : img.values()) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw InputError("image intensity outside [0,1]");
  }
}

Plane circular_shift(const Plane& in, long dy, long dx) {
  const long h = static_cast<long>(in.height());
  const long w = static_cast<long>(in.width());
  Plane out(in.width(), in.height());
  for (long r = 0; r < h; ++r) {
    const long src_r = ((r - dy) % h + h) % h;
    for (long c = 0; c < w; ++c) {
      const long src_c = ((c - dx) % w + w) % w;
      out.at(r, c) = in.at(src_r, src_c);
    }
  }
  return out;
}

double max_abs_difference(const Plane& a, const Plane& b) {
  if (!a.same_shape(b)) throw InputError("plane shapes differ");
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::abs(av[i] - bv[i]));
  return m;
}

} // namespace wavemorph
