#include "wavemorph/selection.hpp"

#include "wavemorph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wavemorph {

double kl_divergence(const EntropyDistribution& p, const EntropyDistribution& q, double epsilon) {
  if (p.bin_edges != q.bin_edges)
    throw InputError("KL divergence requires identical bin edges (sub-band " +
                     std::to_string(p.subband) + ")");
  if (p.mass.size() != q.mass.size() || p.mass.size() + 1 != p.bin_edges.size())
    throw InputError("distribution mass does not match its bin edges");
  if (!(epsilon >= 0.0)) throw InputError("KL smoothing epsilon must be non-negative");

  const double bins = static_cast<double>(p.mass.size());
  const double p_norm = std::accumulate(p.mass.begin(), p.mass.end(), 0.0) + bins * epsilon;
  const double q_norm = std::accumulate(q.mass.begin(), q.mass.end(), 0.0) + bins * epsilon;
  double d = 0.0;
  for (std::size_t k = 0; k < p.mass.size(); ++k) {
    const double pk = (p.mass[k] + epsilon) / p_norm;
    const double qk = (q.mass[k] + epsilon) / q_norm;
    if (pk > 0.0) d += pk * std::log2(pk / qk);
  }
  return d;
}

DatasetDistributions build_dataset_distributions(const std::string& dataset_id,
                                                 std::span<const EntropySample> samples,
                                                 int bins) {
  std::array<std::vector<double>, kNumSubbands> bona, morph;
  for (const auto& s : samples) {
    if (s.dataset_id != dataset_id) continue;
    if (s.subband < 1 || s.subband > kNumSubbands)
      throw InputError("entropy sample with sub-band " + std::to_string(s.subband));
    auto& bucket = s.label == ClassLabel::bonafide ? bona : morph;
    bucket[static_cast<std::size_t>(s.subband - 1)].push_back(s.value);
  }

  DatasetDistributions out{dataset_id, {}};
  out.pairs.reserve(kNumSubbands);
  for (int i = 0; i < kNumSubbands; ++i) {
    const auto& b = bona[static_cast<std::size_t>(i)];
    const auto& m = morph[static_cast<std::size_t>(i)];
    if (b.empty() || m.empty())
      throw InputError("dataset '" + dataset_id + "' has no " +
                       (b.empty() ? "bonafide" : "morphed") + " samples for sub-band " +
                       std::to_string(i + 1));
    const auto edges = pooled_bin_edges(b, m, bins);
    out.pairs.push_back({estimate_distribution(b, edges, i + 1, ClassLabel::bonafide),
                         estimate_distribution(m, edges, i + 1, ClassLabel::morphed)});
  }
  return out;
}

KlRankingTable rank_subbands(std::span<const DatasetDistributions> datasets, double epsilon) {
  if (datasets.empty()) throw InputError("ranking needs at least one dataset");
  KlRankingTable t;
  t.epsilon = epsilon;

  for (const auto& ds : datasets) {
    if (ds.pairs.size() != static_cast<std::size_t>(kNumSubbands))
      throw InputError("dataset '" + ds.dataset_id + "' supplies " +
                       std::to_string(ds.pairs.size()) + " sub-band pairs, expected 48");
    if (t.per_dataset.count(ds.dataset_id))
      throw InputError("duplicate dataset id '" + ds.dataset_id + "'");
    SubbandValues kl{};
    for (int i = 0; i < kNumSubbands; ++i) {
      const auto& pair = ds.pairs[static_cast<std::size_t>(i)];
      if (pair.bonafide.subband != i + 1 || pair.morphed.subband != i + 1)
        throw InputError("dataset '" + ds.dataset_id + "' is missing the pair for sub-band " +
                         std::to_string(i + 1));
      kl[static_cast<std::size_t>(i)] = kl_divergence(pair.bonafide, pair.morphed, epsilon);
    }
    t.per_dataset.emplace(ds.dataset_id, kl);
  }

  // std::map iteration order makes the reduction independent of input order.
  for (const auto& [id, kl] : t.per_dataset) {
    double mean = 0.0;
    for (double v : kl) mean += v;
    mean /= kNumSubbands;
    SubbandValues z{};
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = kl[i] - mean;
    t.zero_meaned.emplace(id, z);
  }
  for (std::size_t i = 0; i < t.averaged.size(); ++i) {
    double sum = 0.0;
    for (const auto& [id, z] : t.zero_meaned) sum += z[i];
    t.averaged[i] = sum / static_cast<double>(t.zero_meaned.size());
  }

  t.order.resize(kNumSubbands);
  std::iota(t.order.begin(), t.order.end(), 1);
  std::stable_sort(t.order.begin(), t.order.end(), [&](int a, int b) {
    return t.averaged[static_cast<std::size_t>(a - 1)] > t.averaged[static_cast<std::size_t>(b - 1)];
  });
  return t;
}

std::vector<int> select(const KlRankingTable& table, const SelectionPolicy& policy) {
  if (table.order.size() != static_cast<std::size_t>(kNumSubbands))
    throw InputError("ranking table is not ranked");
  if (const auto* top = std::get_if<TopK>(&policy)) {
    if (top->k < 1 || top->k > kNumSubbands)
      throw InputError("top-k must be in [1,48], got " + std::to_string(top->k));
    return {table.order.begin(), table.order.begin() + top->k};
  }
  const double t = std::get<Threshold>(policy).value;
  std::vector<int> out;
  for (int idx : table.order)
    if (table.averaged[static_cast<std::size_t>(idx - 1)] > t) out.push_back(idx);
  return out;
}

void apply_selection(KlRankingTable& table, const SelectionPolicy& policy) {
  table.selected = select(table, policy);
  if (const auto* th = std::get_if<Threshold>(&policy))
    table.threshold = th->value;
  else
    table.threshold.reset();
}

} // namespace wavemorph
