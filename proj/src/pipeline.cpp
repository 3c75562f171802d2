#include "wavemorph/pipeline.hpp"

#include "wavemorph/errors.hpp"
#include "wavemorph/wavelet.hpp"

#include <omp.h>

namespace wavemorph {

SubbandValues subband_entropies(const Image& img, const FilterPair& filters, int levels,
                                Backend backend) {
  const SubBandStack stack = decompose_48(img, filters, backend);
  SubbandValues out{};
  for (int i = 1; i <= kNumSubbands; ++i)
    out[static_cast<std::size_t>(i - 1)] = shannon_entropy(stack.band(i), levels);
  return out;
}

std::vector<ImageEntropies> compute_entropies(const LoadedDataset& dataset, const FilterPair& filters,
                                              int levels, int workers) {
  const auto& entries = dataset.manifest.entries;
  if (dataset.images.size() != entries.size()) throw InputError("dataset images do not match manifest");
  std::vector<ImageEntropies> out(entries.size());
  std::vector<std::string> errors(entries.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < static_cast<long>(entries.size()); ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      out[u] = {entries[u].image_id, entries[u].label, entries[u].split,
                subband_entropies(dataset.images[u], filters, levels, Backend::serial)};
    } catch (const std::exception& e) {
      errors[u] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!errors[i].empty()) throw InputError(entries[i].image_id + ": " + errors[i]);
  return out;
}

std::vector<ImageEntropies> filter_split(std::span<const ImageEntropies> images, Split split) {
  std::vector<ImageEntropies> out;
  for (const auto& img : images)
    if (img.split == split) out.push_back(img);
  return out;
}

std::vector<EntropySample> to_samples(const std::string& dataset_id,
                                      std::span<const ImageEntropies> images) {
  std::vector<EntropySample> out;
  out.reserve(images.size() * kNumSubbands);
  for (const auto& img : images)
    for (int i = 1; i <= kNumSubbands; ++i)
      out.push_back({dataset_id, img.image_id, img.label, i, img.entropy[static_cast<std::size_t>(i - 1)]});
  return out;
}

KlRankingTable rank_datasets(std::span<const DatasetEntropies> datasets, int bins, double epsilon) {
  std::vector<DatasetDistributions> dists;
  dists.reserve(datasets.size());
  for (const auto& ds : datasets) {
    const auto train = filter_split(ds.images, Split::train);
    const auto samples = to_samples(ds.dataset_id, train);
    dists.push_back(build_dataset_distributions(ds.dataset_id, samples, bins));
  }
  return rank_subbands(dists, epsilon);
}

} // namespace wavemorph
