#include "wavemorph/image_io.hpp"

#include "wavemorph/errors.hpp"
#include "wavemorph/stack_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>

namespace wavemorph {

namespace {

class PgmCursor {
public:
  PgmCursor(const std::vector<std::uint8_t>& bytes, std::string source)
      : bytes_(bytes), source_(std::move(source)) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
      throw InputError(source_ + ": malformed PGM header");
    unsigned long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1'000'000'000UL) throw InputError(source_ + ": PGM header value too large");
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

private:
  const std::vector<std::uint8_t>& bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

} // namespace

Image read_pgm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  const std::string src = path.string();
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2'))
    throw InputError(src + ": not a greyscale PGM (P5/P2)");
  const bool binary = bytes[1] == '5';
  PgmCursor cur(bytes, src);
  cur.advance(2);
  const auto width = cur.number();
  const auto height = cur.number();
  const auto maxval = cur.number();
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535)
    throw InputError(src + ": invalid PGM dimensions or maxval");

  std::vector<double> data(width * height);
  const double denom = static_cast<double>(maxval);
  if (binary) {
    cur.advance(1); // single whitespace after maxval
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() < cur.pos() + data.size() * bpp) throw InputError(src + ": truncated PGM data");
    const std::uint8_t* p = bytes.data() + cur.pos();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const unsigned v = bpp == 1 ? p[i] : (unsigned(p[2 * i]) << 8) | p[2 * i + 1];
      if (v > maxval) throw InputError(src + ": PGM sample exceeds maxval");
      data[i] = v / denom;
    }
  } else {
    for (auto& d : data) {
      const auto v = cur.number();
      if (v > maxval) throw InputError(src + ": PGM sample exceeds maxval");
      d = static_cast<double>(v) / denom;
    }
  }
  return Image(width, height, std::move(data));
}

void write_pgm(const std::filesystem::path& path, const Image& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + img.size());
  for (double v : img.values())
    out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
  write_file_bytes(path, out);
}

Image read_png(const std::filesystem::path& path) {
  const std::string src = path.string();
  if (!std::filesystem::exists(path)) throw IoError("cannot open '" + src + "' for reading");
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, src.c_str()))
    throw InputError(src + ": " + image.message);

  const bool colour = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::size_t channels = colour ? 3 : 1;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw InputError(src + ": " + msg);
  }

  Image img(image.width, image.height);
  const std::uint8_t* p = buffer.data();
  for (double& v : img.values()) {
    v = colour ? rec601_luma(p[0] / 255.0, p[1] / 255.0, p[2] / 255.0) : p[0] / 255.0;
    v = std::clamp(v, 0.0, 1.0);
    p += channels;
  }
  return img;
}

void write_png(const std::filesystem::path& path, const Image& img) {
  std::vector<std::uint8_t> pixels(img.size());
  auto v = img.values();
  for (std::size_t i = 0; i < pixels.size(); ++i)
    pixels[i] = static_cast<std::uint8_t>(std::lround(std::clamp(v[i], 0.0, 1.0) * 255.0));

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, pixels.data(), 0, nullptr))
    throw IoError("error writing '" + path.string() + "': " + image.message);
}

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

} // namespace

bool is_supported_image(const std::filesystem::path& path) {
  const auto ext = lower_extension(path);
  return ext == ".pgm" || ext == ".png";
}

Image read_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw InputError("no such file: '" + path.string() + "'");
  const auto ext = lower_extension(path);
  if (ext == ".pgm") return read_pgm(path);
  if (ext == ".png") return read_png(path);
  throw InputError(path.string() + ": unsupported image format (expected .pgm or .png)");
}

Image resize_bilinear(const Image& img, std::size_t width, std::size_t height) {
  if (img.empty() || width == 0 || height == 0) throw InputError("resize of an empty image");
  if (img.width() == width && img.height() == height) return img;
  Image out(width, height);
  const double sx = static_cast<double>(img.width()) / static_cast<double>(width);
  const double sy = static_cast<double>(img.height()) / static_cast<double>(height);
  const double max_x = static_cast<double>(img.width() - 1);
  const double max_y = static_cast<double>(img.height() - 1);
  for (std::size_t r = 0; r < height; ++r) {
    const double y = std::clamp((static_cast<double>(r) + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(y);
    const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
    const double fy = y - static_cast<double>(y0);
    for (std::size_t c = 0; c < width; ++c) {
      const double x = std::clamp((static_cast<double>(c) + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(x);
      const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
      const double fx = x - static_cast<double>(x0);
      const double top = img.at(y0, x0) * (1 - fx) + img.at(y0, x1) * fx;
      const double bot = img.at(y1, x0) * (1 - fx) + img.at(y1, x1) * fx;
      out.at(r, c) = top * (1 - fy) + bot * fy;
    }
  }
  return out;
}

} // namespace wavemorph
