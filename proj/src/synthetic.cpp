#include "wavemorph/synthetic.hpp"

#include "wavemorph/errors.hpp"
#include "wavemorph/hash.hpp"
#include "wavemorph/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace fs = std::filesystem;

namespace wavemorph {

namespace {

// Box-Muller on raw mt19937_64 output; std::normal_distribution is not
// specified bit-for-bit across standard libraries.
class Gaussian {
public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * i * i / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Periodic separable blur; sigma <= 0 leaves that axis untouched.
Plane blur(const Plane& in, double sigma_x, double sigma_y) {
  const long w = static_cast<long>(in.width());
  const long h = static_cast<long>(in.height());
  Plane tmp = in;
  if (sigma_x > 0) {
    const auto k = gaussian_kernel(sigma_x);
    const long r = static_cast<long>(k.size() / 2);
    for (long y = 0; y < h; ++y)
      for (long x = 0; x < w; ++x) {
        double acc = 0.0;
        for (long i = -r; i <= r; ++i)
          acc += k[static_cast<std::size_t>(i + r)] * in.at(y, ((x + i) % w + w) % w);
        tmp.at(y, x) = acc;
      }
  }
  Plane out = tmp;
  if (sigma_y > 0) {
    const auto k = gaussian_kernel(sigma_y);
    const long r = static_cast<long>(k.size() / 2);
    for (long y = 0; y < h; ++y)
      for (long x = 0; x < w; ++x) {
        double acc = 0.0;
        for (long i = -r; i <= r; ++i)
          acc += k[static_cast<std::size_t>(i + r)] * tmp.at(((y + i) % h + h) % h, x);
        out.at(y, x) = acc;
      }
  }
  return out;
}

Plane white_noise(std::size_t size, Gaussian& g) {
  Plane p(size, size);
  for (double& v : p.values()) v = g.normal();
  return p;
}

// Rescales to unit standard deviation around zero mean.
void standardize(Plane& p) {
  double mean = 0.0;
  for (double v : p.values()) mean += v;
  mean /= static_cast<double>(p.size());
  double var = 0.0;
  for (double v : p.values()) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(p.size()));
  for (double& v : p.values()) v = sd > 0 ? (v - mean) / sd : 0.0;
}

std::uint64_t stream_seed(std::uint64_t seed, const std::string& role, std::size_t index) {
  return fnv1a64(role + ":" + std::to_string(index), fnv1a64(std::to_string(seed)));
}

} // namespace

Image bonafide_texture(std::size_t size, std::uint64_t seed, const TextureParams& params) {
  if (size < kMinImageSide) throw InputError("synthetic image size must be at least 8");
  Gaussian g(seed);

  Plane background = blur(white_noise(size, g), params.background_sigma, params.background_sigma);
  standardize(background);
  Plane horizontal = blur(white_noise(size, g), params.streak_sigma, 0.0);
  Plane vertical = blur(white_noise(size, g), 0.0, params.streak_sigma);
  standardize(horizontal);
  standardize(vertical);

  Image img(size, size);
  auto out = img.values();
  auto bg = background.values();
  auto hz = horizontal.values();
  auto vt = vertical.values();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = 0.5 + params.background_amplitude * bg[i] +
             params.streak_amplitude * std::sqrt(0.5) * (hz[i] + vt[i]);
  for (double& v : out) {
    if (g.uniform() < params.speckle_density)
      v += (g.uniform() < 0.5 ? -1.0 : 1.0) * params.speckle_amplitude * (0.5 + 0.5 * g.uniform());
  }
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return img;
}

std::vector<SyntheticImage> generate_synthetic(const SyntheticOptions& o) {
  if (o.n_bonafide == 0 || o.n_morphed == 0) throw InputError("synthetic dataset needs both classes");
  std::vector<SyntheticImage> out(o.n_bonafide + o.n_morphed);
  char name[32];
  for (std::size_t i = 0; i < o.n_bonafide; ++i) {
    std::snprintf(name, sizeof name, "bonafide/bf_%04zu", i);
    out[i] = {name, ClassLabel::bonafide,
              bonafide_texture(o.size, stream_seed(o.seed, "bonafide", i), o.texture)};
  }
  for (std::size_t j = 0; j < o.n_morphed; ++j) {
    const Image a = bonafide_texture(o.size, stream_seed(o.seed, "source", 2 * j), o.texture);
    const Image b = bonafide_texture(o.size, stream_seed(o.seed, "source", 2 * j + 1), o.texture);
    std::snprintf(name, sizeof name, "morphed/mo_%04zu", j);
    out[o.n_bonafide + j] = {name, ClassLabel::morphed, synth_morph(a, b, o.alpha)};
  }
  return out;
}

LoadedDataset synthetic_dataset(const std::vector<SyntheticImage>& images,
                                const std::string& dataset_id, std::uint64_t seed,
                                const SplitRatios& ratios) {
  LoadedDataset d;
  d.manifest.dataset_id = dataset_id;
  for (const auto& s : images) {
    d.manifest.entries.push_back({s.image_id, s.image_id + ".pgm", s.label,
                                  assign_split(s.image_id, seed, ratios)});
    d.images.push_back(s.image);
  }
  validate_manifest(d.manifest);
  return d;
}

void write_synthetic(const fs::path& dir, const std::vector<SyntheticImage>& images) {
  std::error_code ec;
  fs::create_directories(dir / "bonafide", ec);
  fs::create_directories(dir / "morphed", ec);
  if (ec) throw IoError("cannot create dataset directories under '" + dir.string() + "'");
  for (const auto& s : images) write_pgm(dir / (s.image_id + ".pgm"), s.image);
}

} // namespace wavemorph
