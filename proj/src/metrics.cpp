#include "wavemorph/metrics.hpp"

#include "wavemorph/errors.hpp"
#include "wavemorph/stack_io.hpp"
#include "wavemorph/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wavemorph {

std::size_t ScoreSet::count(ClassLabel label) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [label](const ScoreEntry& e) { return e.label == label; }));
}

namespace {

struct SortedScores {
  std::vector<double> bona;
  std::vector<double> morph;
};

SortedScores split_sorted(const ScoreSet& scores) {
  SortedScores s;
  for (const auto& e : scores.entries) {
    if (!std::isfinite(e.score)) throw InputError("non-finite score for '" + e.image_id + "'");
    (e.label == ClassLabel::bonafide ? s.bona : s.morph).push_back(e.score);
  }
  std::sort(s.bona.begin(), s.bona.end());
  std::sort(s.morph.begin(), s.morph.end());
  return s;
}

void require_both(const SortedScores& s) {
  if (s.bona.empty() || s.morph.empty())
    throw InputError("metric needs both bonafide and morphed scores");
}

double below(const std::vector<double>& sorted, double t) {
  return static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
}

double apcer_sorted(const SortedScores& s, double t) {
  return below(s.morph, t) / static_cast<double>(s.morph.size());
}

double bpcer_sorted(const SortedScores& s, double t) {
  return (static_cast<double>(s.bona.size()) - below(s.bona, t)) /
         static_cast<double>(s.bona.size());
}

std::vector<OperatingPoint> sweep(const ScoreSet& scores, const SortedScores& s) {
  std::vector<OperatingPoint> pts;
  for (double t : candidate_thresholds(scores)) pts.push_back({t, apcer_sorted(s, t), bpcer_sorted(s, t)});
  return pts;
}

} // namespace

double apcer(const ScoreSet& scores, double threshold) {
  const auto s = split_sorted(scores);
  if (s.morph.empty()) throw InputError("APCER needs at least one morphed score");
  return apcer_sorted(s, threshold);
}

double bpcer(const ScoreSet& scores, double threshold) {
  const auto s = split_sorted(scores);
  if (s.bona.empty()) throw InputError("BPCER needs at least one bonafide score");
  return bpcer_sorted(s, threshold);
}

std::vector<double> candidate_thresholds(const ScoreSet& scores) {
  std::vector<double> t;
  t.reserve(scores.entries.size() + 2);
  for (const auto& e : scores.entries) t.push_back(e.score);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  t.insert(t.begin(), -std::numeric_limits<double>::infinity());
  t.push_back(std::numeric_limits<double>::infinity());
  return t;
}

EqualErrorRate d_eer(const ScoreSet& scores) {
  const auto s = split_sorted(scores);
  require_both(s);
  EqualErrorRate best;
  double best_gap = std::numeric_limits<double>::infinity();
  for (const auto& p : sweep(scores, s)) {
    const double gap = std::abs(p.apcer - p.bpcer);
    if (gap < best_gap) {
      best_gap = gap;
      best = {(p.apcer + p.bpcer) / 2.0, p.threshold, p.apcer, p.bpcer};
    }
  }
  return best;
}

double bpcer_at_apcer(const ScoreSet& scores, double target) {
  if (!(target > 0.0 && target <= 1.0)) throw InputError("APCER target must be in (0, 1]");
  const auto s = split_sorted(scores);
  require_both(s);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : sweep(scores, s))
    if (p.apcer <= target) best = std::min(best, p.bpcer);
  if (!std::isfinite(best)) throw InvariantError("no threshold reached the APCER target");
  return best;
}

double roc_auc(const ScoreSet& scores) {
  const auto s = split_sorted(scores);
  require_both(s);
  // Twice the U statistic, kept integral so ties add exactly one half.
  unsigned long long twice_u = 0;
  for (double m : s.morph) {
    const auto lo = std::lower_bound(s.bona.begin(), s.bona.end(), m) - s.bona.begin();
    const auto hi = std::upper_bound(s.bona.begin(), s.bona.end(), m) - s.bona.begin();
    twice_u += 2ULL * static_cast<unsigned long long>(lo) + static_cast<unsigned long long>(hi - lo);
  }
  return static_cast<double>(twice_u) /
         (2.0 * static_cast<double>(s.bona.size()) * static_cast<double>(s.morph.size()));
}

std::vector<OperatingPoint> det_curve(const ScoreSet& scores) {
  const auto s = split_sorted(scores);
  require_both(s);
  return sweep(scores, s);
}

MetricsReport evaluate(const ScoreSet& scores) {
  return {d_eer(scores), bpcer_at_apcer(scores, 0.05), bpcer_at_apcer(scores, 0.10),
          roc_auc(scores)};
}

ScoreSet parse_scores_csv(const std::string& text, const std::string& source) {
  ScoreSet s;
  for (const auto& r : parse_csv(text, {"image_id", "label", "score"}, source)) {
    const double v = parse_double(r[2], "score");
    if (!std::isfinite(v)) throw InputError(source + ": non-finite score for '" + r[0] + "'");
    s.entries.push_back({r[0], parse_label(r[1]), v});
  }
  return s;
}

ScoreSet read_scores_csv(const std::filesystem::path& path) {
  return parse_scores_csv(read_text_file(path), path.string());
}

std::string scores_csv(const ScoreSet& scores) {
  std::ostringstream os;
  os << "image_id,label,score\n";
  for (const auto& e : scores.entries)
    os << e.image_id << ',' << to_string(e.label) << ',' << format_double(e.score) << '\n';
  return os.str();
}

std::string metrics_json(const MetricsReport& r) {
  nlohmann::json j;
  j["deer"] = r.deer.rate;
  if (std::isfinite(r.deer.threshold))
    j["deer_threshold"] = r.deer.threshold;
  else
    j["deer_threshold"] = format_double(r.deer.threshold);
  j["bpcer_at_5"] = r.bpcer_at_5;
  j["bpcer_at_10"] = r.bpcer_at_10;
  j["auc"] = r.auc;
  return j.dump(2) + "\n";
}

std::string det_csv(const std::vector<OperatingPoint>& curve) {
  std::ostringstream os;
  os << "threshold,apcer,bpcer\n";
  for (const auto& p : curve)
    os << format_double(p.threshold) << ',' << format_double(p.apcer) << ',' << format_double(p.bpcer)
       << '\n';
  return os.str();
}

} // namespace wavemorph
