#include "wavemorph/features.hpp"

#include "wavemorph/errors.hpp"
#include "wavemorph/stack_io.hpp"
#include "wavemorph/text.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wavemorph {

double shannon_entropy(std::span<const double> values, int levels) {
  if (values.empty()) throw InputError("entropy of an empty plane");
  if (levels < 2) throw InputError("entropy needs at least 2 quantization levels");
  double lo = values[0], hi = values[0];
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("plane contains non-finite values");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) return 0.0;

  std::vector<std::size_t> counts(static_cast<std::size_t>(levels), 0);
  const double range = hi - lo;
  const double top = static_cast<double>(levels - 1);
  for (double v : values) {
    auto q = static_cast<long>(std::floor((v - lo) * top / range));
    q = std::clamp(q, 0L, static_cast<long>(levels - 1));
    ++counts[static_cast<std::size_t>(q)];
  }
  const double n = static_cast<double>(values.size());
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

std::vector<double> pooled_bin_edges(std::span<const double> a, std::span<const double> b,
                                     int bins) {
  if (bins < 1) throw InputError("histogram needs at least one bin");
  if (a.empty() && b.empty()) throw InputError("no samples to derive bin edges from");
  double lo = a.empty() ? b[0] : a[0];
  double hi = lo;
  for (auto s : {a, b})
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i)
    edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / bins;
  edges.back() = hi;
  return edges;
}

EntropyDistribution estimate_distribution(std::span<const double> values,
                                          std::span<const double> bin_edges, int subband,
                                          ClassLabel label) {
  if (values.empty()) throw InputError("distribution needs at least one sample");
  if (bin_edges.size() < 2) throw InputError("distribution needs at least two bin edges");
  for (std::size_t i = 1; i < bin_edges.size(); ++i)
    if (!(bin_edges[i] > bin_edges[i - 1]))
      throw InputError("bin edges must be strictly increasing");

  const std::size_t bins = bin_edges.size() - 1;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("non-finite entropy sample");
    auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), v);
    std::size_t bin = it == bin_edges.begin() ? 0 : static_cast<std::size_t>(it - bin_edges.begin()) - 1;
    bin = std::min(bin, bins - 1);
    ++counts[bin];
  }

  EntropyDistribution d;
  d.subband = subband;
  d.label = label;
  d.bin_edges.assign(bin_edges.begin(), bin_edges.end());
  d.n_samples = values.size();
  d.mass.resize(bins);
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < bins; ++i) d.mass[i] = static_cast<double>(counts[i]) / n;
  return d;
}

void write_entropy_csv(const std::filesystem::path& path, std::span<const EntropySample> samples) {
  std::ostringstream os;
  os << "dataset,image_id,class,subband,entropy_bits\n";
  for (const auto& s : samples)
    os << s.dataset_id << ',' << s.image_id << ',' << to_string(s.label) << ',' << s.subband << ','
       << format_double(s.value) << '\n';
  write_text_file(path, os.str());
}

std::vector<EntropySample> read_entropy_csv(const std::filesystem::path& path) {
  const auto rows = parse_csv(read_text_file(path), {"dataset", "image_id", "class", "subband",
                                                     "entropy_bits"}, path.string());
  std::vector<EntropySample> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    out.push_back({r[0], r[1], parse_label(r[2]), parse_int(r[3], "subband"),
                   parse_double(r[4], "entropy_bits")});
  return out;
}

} // namespace wavemorph
