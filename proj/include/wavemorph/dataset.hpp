#pragma once

#include "wavemorph/filters.hpp"
#include "wavemorph/plane.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wavemorph {

struct ManifestEntry {
  std::string image_id;
  std::string path; // relative to the dataset root, '/' separated
  ClassLabel label = ClassLabel::bonafide;
  Split split = Split::train;
};

struct DatasetManifest {
  std::string dataset_id;
  std::filesystem::path root;
  std::vector<ManifestEntry> entries;

  std::size_t count(ClassLabel label) const noexcept;
};

struct SplitRatios {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
};

/// Deterministic split from a seeded hash of the image id.
Split assign_split(const std::string& image_id, std::uint64_t seed, const SplitRatios& ratios = {});

/// Uses <root>/manifest.csv when present, otherwise scans <root>/bonafide
/// and <root>/morphed for .pgm/.png files. Entries are ordered byte-wise by
/// relative path; image ids are the relative path without extension.
/// The dataset id is the root directory name.
DatasetManifest scan_dataset(const std::filesystem::path& root, std::uint64_t seed,
                             const SplitRatios& ratios = {});

/// CSV `image_id,path,label,split`.
std::string manifest_csv(const DatasetManifest& manifest);
DatasetManifest parse_manifest_csv(const std::string& text, const std::filesystem::path& root,
                                   const std::string& source = "manifest");
std::string manifest_hash(const DatasetManifest& manifest);

/// Throws InputError on duplicate ids or an empty class.
void validate_manifest(const DatasetManifest& manifest);

struct LoadedDataset {
  DatasetManifest manifest;
  std::vector<Image> images; // parallel to manifest.entries
};

/// Decodes every entry to luminance in [0,1] and resizes to resize x resize
/// (0 keeps native size). Decoding runs on up to `workers` threads (0 means
/// the OpenMP default). All failing paths are listed in one InputError.
LoadedDataset load_dataset(DatasetManifest manifest, std::size_t resize, int workers = 0);

/// Per-pixel alpha*a + (1-alpha)*b, clamped to [0,1].
Image synth_morph(const Image& a, const Image& b, double alpha);

/// Writes one WSB1 tensor per image (channels in `indices` order) and an
/// export.json sidecar. On failure every file written so far is removed.
/// Returns the tensor paths in manifest order.
std::vector<std::filesystem::path> export_selected(const LoadedDataset& dataset,
                                                   std::span<const int> indices,
                                                   const FilterPair& filters,
                                                   const std::filesystem::path& out_dir,
                                                   int workers = 0);

/// File name used for an image's tensor: id with '/' replaced by "__".
std::string tensor_file_name(const std::string& image_id);

} // namespace wavemorph
