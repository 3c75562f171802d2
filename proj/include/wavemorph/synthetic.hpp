#pragma once

#include "wavemorph/dataset.hpp"
#include "wavemorph/plane.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wavemorph {

/// Knobs of the bona fide texture model: oriented Gaussian streaks plus
/// sparse speckles on a mid-grey, slowly varying background.
struct TextureParams {
  double background_amplitude = 0.08; // smooth low-frequency shading
  double background_sigma = 8.0;
  double streak_amplitude = 0.10;     // horizontal + vertical streak texture
  double streak_sigma = 3.0;          // smoothing along the streak direction
  double speckle_density = 0.01;      // fraction of pixels carrying a speckle
  double speckle_amplitude = 0.5;
};

/// One seeded bona fide texture of size x size, values clamped to [0,1].
Image bonafide_texture(std::size_t size, std::uint64_t seed, const TextureParams& params = {});

struct SyntheticOptions {
  std::size_t n_bonafide = 200;
  std::size_t n_morphed = 200;
  std::size_t size = 64;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  TextureParams texture;
};

struct SyntheticImage {
  std::string image_id; // "bonafide/bf_0000" or "morphed/mo_0000"
  ClassLabel label = ClassLabel::bonafide;
  Image image;
};

/// Bona fide images are independent textures. Each morph blends a fresh,
/// disjoint pair of source textures that are not part of the bona fide set.
std::vector<SyntheticImage> generate_synthetic(const SyntheticOptions& options);

/// In-memory dataset with hash-assigned splits; paths are "<id>.pgm".
LoadedDataset synthetic_dataset(const std::vector<SyntheticImage>& images,
                                const std::string& dataset_id, std::uint64_t seed,
                                const SplitRatios& ratios = {});

/// Writes <dir>/bonafide/*.pgm and <dir>/morphed/*.pgm.
void write_synthetic(const std::filesystem::path& dir, const std::vector<SyntheticImage>& images);

} // namespace wavemorph
