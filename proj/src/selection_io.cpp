#include "wavemorph/errors.hpp"
#include "wavemorph/selection.hpp"
#include "wavemorph/stack_io.hpp"
#include "wavemorph/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace wavemorph {

std::string ranking_csv(const KlRankingTable& table) {
  std::vector<int> rank_of(kNumSubbands + 1, 0);
  for (std::size_t r = 0; r < table.order.size(); ++r) rank_of[static_cast<std::size_t>(table.order[r])] = static_cast<int>(r) + 1;

  std::ostringstream os;
  os << "subband,dataset,kl_bits,kl_zero_meaned,kl_averaged,rank\n";
  for (const auto& [id, kl] : table.per_dataset) {
    const auto& z = table.zero_meaned.at(id);
    for (int idx : table.order) {
      const auto i = static_cast<std::size_t>(idx - 1);
      os << idx << ',' << id << ',' << format_double(kl[i]) << ',' << format_double(z[i]) << ','
         << format_double(table.averaged[i]) << ',' << rank_of[static_cast<std::size_t>(idx)] << '\n';
    }
  }
  return os.str();
}

void write_ranking_csv(const std::filesystem::path& path, const KlRankingTable& table) {
  write_text_file(path, ranking_csv(table));
}

KlRankingTable parse_ranking_csv(const std::string& text, const std::string& source) {
  const auto rows = parse_csv(
      text, {"subband", "dataset", "kl_bits", "kl_zero_meaned", "kl_averaged", "rank"}, source);
  KlRankingTable t;
  std::map<std::string, std::set<int>> seen;
  std::array<std::optional<double>, kNumSubbands> avg;
  std::array<int, kNumSubbands> rank{};
  for (const auto& r : rows) {
    const int idx = parse_int(r[0], "subband");
    if (idx < 1 || idx > kNumSubbands) throw InputError(source + ": sub-band out of range");
    const auto i = static_cast<std::size_t>(idx - 1);
    const std::string& id = r[1];
    if (!seen[id].insert(idx).second)
      throw InputError(source + ": duplicate row for dataset '" + id + "' sub-band " + r[0]);
    t.per_dataset[id][i] = parse_double(r[2], "kl_bits");
    t.zero_meaned[id][i] = parse_double(r[3], "kl_zero_meaned");
    const double a = parse_double(r[4], "kl_averaged");
    const int rk = parse_int(r[5], "rank");
    if (avg[i] && (*avg[i] != a || rank[i] != rk))
      throw InputError(source + ": inconsistent averaged value for sub-band " + r[0]);
    avg[i] = a;
    rank[i] = rk;
  }
  if (seen.empty()) throw InputError(source + ": no ranking rows");
  for (const auto& [id, s] : seen)
    if (s.size() != static_cast<std::size_t>(kNumSubbands))
      throw InputError(source + ": dataset '" + id + "' has " + std::to_string(s.size()) +
                       " sub-bands, expected 48");
  t.order.assign(kNumSubbands, 0);
  for (std::size_t i = 0; i < avg.size(); ++i) {
    t.averaged[i] = *avg[i];
    if (rank[i] < 1 || rank[i] > kNumSubbands || t.order[static_cast<std::size_t>(rank[i] - 1)] != 0)
      throw InputError(source + ": ranks are not a permutation of 1..48");
    t.order[static_cast<std::size_t>(rank[i] - 1)] = static_cast<int>(i) + 1;
  }
  return t;
}

KlRankingTable read_ranking_csv(const std::filesystem::path& path) {
  return parse_ranking_csv(read_text_file(path), path.string());
}

std::string selection_json(const Selection& selection) {
  nlohmann::json policy;
  if (const auto* top = std::get_if<TopK>(&selection.policy)) {
    policy = {{"kind", "top_k"}, {"k", top->k}};
  } else {
    const double v = std::get<Threshold>(selection.policy).value;
    policy = {{"kind", "threshold"}};
    if (std::isfinite(v))
      policy["threshold"] = v;
    else
      policy["threshold"] = format_double(v);
  }
  nlohmann::json j = {{"policy", policy}, {"indices", selection.indices}};
  return j.dump(2) + "\n";
}

Selection parse_selection_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("selection JSON: ") + e.what());
  }
  try {
    Selection s;
    const auto& p = j.at("policy");
    const std::string kind = p.at("kind").get<std::string>();
    if (kind == "top_k") {
      s.policy = TopK{p.at("k").get<int>()};
    } else if (kind == "threshold") {
      const auto& v = p.at("threshold");
      s.policy = Threshold{v.is_string() ? parse_double(v.get<std::string>(), "threshold")
                                         : v.get<double>()};
    } else {
      throw InputError("selection JSON: unknown policy kind '" + kind + "'");
    }
    s.indices = j.at("indices").get<std::vector<int>>();
    std::set<int> uniq;
    for (int idx : s.indices) {
      if (idx < 1 || idx > kNumSubbands || !uniq.insert(idx).second)
        throw InputError("selection JSON: invalid or duplicate sub-band index " +
                         std::to_string(idx));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("selection JSON: ") + e.what());
  }
}

void write_selection_json(const std::filesystem::path& path, const Selection& selection) {
  write_text_file(path, selection_json(selection));
}

Selection read_selection_json(const std::filesystem::path& path) {
  return parse_selection_json(read_text_file(path));
}

} // namespace wavemorph
