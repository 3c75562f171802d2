#pragma once

#include "wavemorph/features.hpp"
#include "wavemorph/wavelet.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace wavemorph {

inline constexpr double kDefaultKlEpsilon = 1e-10;

/// KL divergence in bits. Both masses are smoothed by adding `epsilon` to
/// every bin and renormalizing. Throws InputError if the bin edges differ.
double kl_divergence(const EntropyDistribution& p, const EntropyDistribution& q,
                     double epsilon = kDefaultKlEpsilon);

/// Bona fide / morphed distributions of one sub-band on shared bin edges.
struct SubbandPair {
  EntropyDistribution bonafide;
  EntropyDistribution morphed;
};

/// All 48 pairs of one dataset; pairs[i] belongs to sub-band i+1.
struct DatasetDistributions {
  std::string dataset_id;
  std::vector<SubbandPair> pairs;
};

/// Groups one dataset's samples by sub-band and class and estimates each
/// distribution on pooled bin edges. Throws InputError if any sub-band lacks
/// samples of either class.
DatasetDistributions build_dataset_distributions(const std::string& dataset_id,
                                                 std::span<const EntropySample> samples, int bins);

struct KlRankingTable {
  std::map<std::string, SubbandValues> per_dataset; // KL per sub-band, bits
  std::map<std::string, SubbandValues> zero_meaned; // dataset mean removed
  SubbandValues averaged{};                         // mean of zero_meaned over datasets
  std::vector<int> order;                           // all 48 indices, descending averaged
  double epsilon = kDefaultKlEpsilon;
  std::optional<double> threshold;
  std::vector<int> selected;
};

/// Per-dataset KL, per-dataset zero-meaning, cross-dataset average, sort.
/// Ties in the average break by ascending sub-band index.
KlRankingTable rank_subbands(std::span<const DatasetDistributions> datasets,
                             double epsilon = kDefaultKlEpsilon);

struct TopK {
  int k = 22;
};
struct Threshold {
  double value = 0.0;
};
using SelectionPolicy = std::variant<TopK, Threshold>;

/// Returns selected indices in rank order. TopK requires k in [1, 48];
/// Threshold keeps every index with averaged KL strictly above the value.
std::vector<int> select(const KlRankingTable& table, const SelectionPolicy& policy);

/// Applies the policy and records it in table.selected / table.threshold.
void apply_selection(KlRankingTable& table, const SelectionPolicy& policy);

/// CSV `subband,dataset,kl_bits,kl_zero_meaned,kl_averaged,rank`, one row
/// per (dataset, sub-band), rows grouped by dataset and ordered by rank.
void write_ranking_csv(const std::filesystem::path& path, const KlRankingTable& table);
std::string ranking_csv(const KlRankingTable& table);
KlRankingTable read_ranking_csv(const std::filesystem::path& path);
KlRankingTable parse_ranking_csv(const std::string& text, const std::string& source = "ranking");

struct Selection {
  SelectionPolicy policy;
  std::vector<int> indices;
};

/// `{ "policy": {...}, "indices": [...] }` with indices in rank order.
std::string selection_json(const Selection& selection);
Selection parse_selection_json(const std::string& text);
void write_selection_json(const std::filesystem::path& path, const Selection& selection);
Selection read_selection_json(const std::filesystem::path& path);

} // namespace wavemorph
