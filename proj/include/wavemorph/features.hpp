#pragma once

#include "wavemorph/plane.hpp"
#include "wavemorph/wavelet.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wavemorph {

/// Shannon entropy (bits) of a coefficient plane after min-max quantization
/// to `levels` bins: q = floor((x - min) * (levels - 1) / (max - min)).
/// A constant plane has entropy 0. Throws InputError if the plane is empty,
/// non-finite, or levels < 2.
double shannon_entropy(std::span<const double> values, int levels);
inline double shannon_entropy(const Plane& band, int levels) {
  return shannon_entropy(band.values(), levels);
}

using SubbandValues = std::array<double, kNumSubbands>;

/// Entropy of all 48 sub-bands of one image; entropy[i] is sub-band i+1.
struct ImageEntropies {
  std::string image_id;
  ClassLabel label = ClassLabel::bonafide;
  Split split = Split::train;
  SubbandValues entropy{};
};

/// One entropy measurement of one sub-band of one image.
struct EntropySample {
  std::string dataset_id;
  std::string image_id;
  ClassLabel label = ClassLabel::bonafide;
  int subband = 1;
  double value = 0.0;
};

/// Histogram-estimated probability mass over entropy values.
struct EntropyDistribution {
  int subband = 1;
  ClassLabel label = ClassLabel::bonafide;
  std::vector<double> bin_edges; // B+1 strictly increasing
  std::vector<double> mass;      // B values summing to 1
  std::size_t n_samples = 0;
};

/// B equal-width bins spanning [min, max] of the pooled values. A degenerate
/// range is widened to [v - 0.5, v + 0.5].
std::vector<double> pooled_bin_edges(std::span<const double> a, std::span<const double> b,
                                     int bins);

/// Bin i covers [edges[i], edges[i+1]); the last bin is closed. Values below
/// the first edge or above the last are clamped into the end bins.
EntropyDistribution estimate_distribution(std::span<const double> values,
                                          std::span<const double> bin_edges, int subband,
                                          ClassLabel label);

/// CSV with header `dataset,image_id,class,subband,entropy_bits`.
void write_entropy_csv(const std::filesystem::path& path, std::span<const EntropySample> samples);
std::vector<EntropySample> read_entropy_csv(const std::filesystem::path& path);

} // namespace wavemorph
