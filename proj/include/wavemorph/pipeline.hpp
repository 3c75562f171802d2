#pragma once

#include "wavemorph/dataset.hpp"
#include "wavemorph/features.hpp"
#include "wavemorph/filters.hpp"
#include "wavemorph/selection.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wavemorph {

/// Entropy of each of the 48 sub-bands of one image.
SubbandValues subband_entropies(const Image& img, const FilterPair& filters, int levels,
                                Backend backend = Backend::parallel);

/// Decomposes every image (one image per worker, serial kernels inside).
/// Output order follows the manifest.
std::vector<ImageEntropies> compute_entropies(const LoadedDataset& dataset, const FilterPair& filters,
                                              int levels, int workers = 0);

std::vector<ImageEntropies> filter_split(std::span<const ImageEntropies> images, Split split);

/// Flattens to one sample per (image, sub-band).
std::vector<EntropySample> to_samples(const std::string& dataset_id,
                                      std::span<const ImageEntropies> images);

struct DatasetEntropies {
  std::string dataset_id;
  std::vector<ImageEntropies> images;
};

/// Builds distributions from each dataset's train split and ranks sub-bands.
KlRankingTable rank_datasets(std::span<const DatasetEntropies> datasets, int bins, double epsilon);

} // namespace wavemorph
