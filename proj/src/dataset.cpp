#include "wavemorph/dataset.hpp"

#include "wavemorph/errors.hpp"
#include "wavemorph/hash.hpp"
#include "wavemorph/image_io.hpp"
#include "wavemorph/stack_io.hpp"
#include "wavemorph/text.hpp"
#include "wavemorph/wavelet.hpp"

#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace wavemorph {

std::size_t DatasetManifest::count(ClassLabel label) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [label](const ManifestEntry& e) { return e.label == label; }));
}

Split assign_split(const std::string& image_id, std::uint64_t seed, const SplitRatios& ratios) {
  const double total = ratios.train + ratios.validation + ratios.test;
  if (!(ratios.train >= 0 && ratios.validation >= 0 && ratios.test >= 0 && total > 0))
    throw InputError("split ratios must be non-negative with a positive sum");
  std::uint64_t h = fnv1a64(image_id, fnv1a64(std::to_string(seed)));
  // final avalanche so nearby ids do not cluster
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53 * total;
  if (u < ratios.train) return Split::train;
  if (u < ratios.train + ratios.validation) return Split::validation;
  return Split::test;
}

void validate_manifest(const DatasetManifest& manifest) {
  std::set<std::string> ids;
  for (const auto& e : manifest.entries) {
    if (e.image_id.empty()) throw InputError("manifest entry with empty image id");
    if (e.image_id.find(',') != std::string::npos || e.path.find(',') != std::string::npos)
      throw InputError("image id or path contains a comma: '" + e.image_id + "'");
    if (!ids.insert(e.image_id).second)
      throw InputError("duplicate image id '" + e.image_id + "' in dataset '" + manifest.dataset_id + "'");
  }
  for (auto label : {ClassLabel::bonafide, ClassLabel::morphed})
    if (manifest.count(label) == 0)
      throw InputError("dataset '" + manifest.dataset_id + "' has no " +
                       std::string(to_string(label)) + " images");
}

namespace {

std::string dataset_name(const fs::path& root) {
  auto p = root;
  if (!p.has_filename()) p = p.parent_path();
  std::string name = p.filename().string();
  return name.empty() ? "dataset" : name;
}

} // namespace

DatasetManifest scan_dataset(const fs::path& root, std::uint64_t seed, const SplitRatios& ratios) {
  if (!fs::is_directory(root)) throw InputError("dataset root '" + root.string() + "' is not a directory");
  const auto manifest_path = root / "manifest.csv";
  if (fs::exists(manifest_path)) {
    auto m = parse_manifest_csv(read_text_file(manifest_path), root, manifest_path.string());
    m.dataset_id = dataset_name(root);
    return m;
  }

  DatasetManifest m;
  m.dataset_id = dataset_name(root);
  m.root = root;
  for (auto label : {ClassLabel::bonafide, ClassLabel::morphed}) {
    const fs::path dir = root / std::string(to_string(label));
    if (!fs::is_directory(dir))
      throw InputError("dataset root '" + root.string() + "' has no " + std::string(to_string(label)) +
                       "/ directory");
    for (const auto& de : fs::recursive_directory_iterator(dir)) {
      if (!de.is_regular_file() || !is_supported_image(de.path())) continue;
      const std::string rel = fs::relative(de.path(), root).generic_string();
      std::string id = rel.substr(0, rel.size() - de.path().extension().string().size());
      m.entries.push_back({id, rel, label, Split::train});
    }
  }
  std::sort(m.entries.begin(), m.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
  for (auto& e : m.entries) e.split = assign_split(e.image_id, seed, ratios);
  validate_manifest(m);
  return m;
}

std::string manifest_csv(const DatasetManifest& manifest) {
  std::ostringstream os;
  os << "image_id,path,label,split\n";
  for (const auto& e : manifest.entries)
    os << e.image_id << ',' << e.path << ',' << to_string(e.label) << ',' << to_string(e.split) << '\n';
  return os.str();
}

DatasetManifest parse_manifest_csv(const std::string& text, const fs::path& root,
                                   const std::string& source) {
  DatasetManifest m;
  m.dataset_id = dataset_name(root);
  m.root = root;
  for (const auto& r : parse_csv(text, {"image_id", "path", "label", "split"}, source))
    m.entries.push_back({r[0], r[1], parse_label(r[2]), parse_split(r[3])});
  std::sort(m.entries.begin(), m.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
  validate_manifest(m);
  return m;
}

std::string manifest_hash(const DatasetManifest& manifest) {
  return hex64(fnv1a64(manifest_csv(manifest)));
}

LoadedDataset load_dataset(DatasetManifest manifest, std::size_t resize, int workers) {
  validate_manifest(manifest);
  LoadedDataset out;
  const std::size_t n = manifest.entries.size();
  out.images.resize(n);
  std::vector<std::string> errors(n);
  const int threads = workers > 0 ? workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    const auto& e = manifest.entries[static_cast<std::size_t>(i)];
    try {
      Image img = read_image(manifest.root / e.path);
      if (resize > 0) img = resize_bilinear(img, resize, resize);
      out.images[static_cast<std::size_t>(i)] = std::move(img);
    } catch (const std::exception& ex) {
      errors[static_cast<std::size_t>(i)] = ex.what();
    }
  }

  std::string report;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i].empty()) continue;
    ++failures;
    report += "\n  " + (manifest.root / manifest.entries[i].path).string() + ": " + errors[i];
  }
  if (failures > 0)
    throw InputError(std::to_string(failures) + " image(s) could not be loaded:" + report);
  out.manifest = std::move(manifest);
  return out;
}

Image synth_morph(const Image& a, const Image& b, double alpha) {
  if (!a.same_shape(b))
    throw InputError("synth_morph: images are " + std::to_string(a.width()) + "x" +
                     std::to_string(a.height()) + " and " + std::to_string(b.width()) + "x" +
                     std::to_string(b.height()));
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("blend factor must be in [0,1]");
  Image out(a.width(), a.height());
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i)
    ov[i] = std::clamp(alpha * av[i] + (1.0 - alpha) * bv[i], 0.0, 1.0);
  return out;
}

std::string tensor_file_name(const std::string& image_id) {
  std::string name;
  for (std::size_t i = 0; i < image_id.size(); ++i) {
    if (image_id[i] == '/')
      name += "__";
    else
      name += image_id[i];
  }
  return name + ".wsb";
}

std::vector<fs::path> export_selected(const LoadedDataset& dataset, std::span<const int> indices,
                                      const FilterPair& filters, const fs::path& out_dir,
                                      int workers) {
  if (indices.empty()) throw InputError("export needs a non-empty sub-band selection");
  std::set<int> uniq;
  for (int idx : indices)
    if (idx < 1 || idx > kNumSubbands || !uniq.insert(idx).second)
      throw InputError("invalid or duplicate sub-band index " + std::to_string(idx));
  if (dataset.images.size() != dataset.manifest.entries.size())
    throw InputError("dataset images do not match manifest");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "'");

  const std::size_t n = dataset.images.size();
  std::vector<fs::path> paths(n);
  std::vector<std::string> errors(n);
  std::vector<char> written(n, 0);
  std::vector<char> io_failed(n, 0);
  const int threads = workers > 0 ? workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    const auto u = static_cast<std::size_t>(i);
    const auto& entry = dataset.manifest.entries[u];
    try {
      const SubBandStack stack = decompose_48(dataset.images[u], filters, Backend::serial);
      ExportedTensor t{entry.image_id, stack.width(), stack.height(), {}};
      for (int idx : indices) t.channels.push_back(stack.band(idx));
      paths[u] = out_dir / tensor_file_name(entry.image_id);
      write_wsb(paths[u], t);
      written[u] = 1;
    } catch (const IoError& ex) {
      errors[u] = ex.what();
      io_failed[u] = 1;
    } catch (const std::exception& ex) {
      errors[u] = ex.what();
    }
  }

  std::string report;
  bool input_failure = false;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i].empty()) continue;
    ++failures;
    report += "\n  " + dataset.manifest.entries[i].image_id + ": " + errors[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!errors[i].empty() && !io_failed[i]) input_failure = true;

  auto remove_written = [&] {
    for (std::size_t i = 0; i < n; ++i)
      if (written[i]) fs::remove(paths[i], ec);
  };
  if (failures > 0) {
    remove_written();
    const std::string msg = "export failed for " + std::to_string(failures) + " image(s):" + report;
    if (input_failure) throw InputError(msg);
    throw IoError(msg);
  }

  nlohmann::json sidecar = {
      {"format", "WSB1"},
      {"indices", std::vector<int>(indices.begin(), indices.end())},
      {"wavelet", filters.name},
      {"dataset", dataset.manifest.dataset_id},
      {"manifest_hash", manifest_hash(dataset.manifest)},
      {"n_images", n},
  };
  try {
    write_text_file(out_dir / "export.json", sidecar.dump(2) + "\n");
  } catch (...) {
    remove_written();
    throw;
  }
  return paths;
}

} // namespace wavemorph
