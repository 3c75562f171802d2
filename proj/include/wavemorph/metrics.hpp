#pragma once

#include "wavemorph/plane.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace wavemorph {

/// Higher score means more morph-like. Decision rule: score >= threshold
/// is classified as morphed.
struct ScoreEntry {
  std::string image_id;
  ClassLabel label = ClassLabel::bonafide;
  double score = 0.0;
};

struct ScoreSet {
  std::vector<ScoreEntry> entries;

  std::size_t count(ClassLabel label) const noexcept;
};

/// Fraction of morphed entries with score < threshold.
double apcer(const ScoreSet& scores, double threshold);
/// Fraction of bona fide entries with score >= threshold.
double bpcer(const ScoreSet& scores, double threshold);

/// Candidate thresholds: -inf, every distinct score ascending, +inf.
std::vector<double> candidate_thresholds(const ScoreSet& scores);

struct OperatingPoint {
  double threshold = 0.0;
  double apcer = 0.0;
  double bpcer = 0.0;
};

struct EqualErrorRate {
  double rate = 0.0; // (APCER + BPCER) / 2 at the chosen threshold
  double threshold = 0.0;
  double apcer = 0.0;
  double bpcer = 0.0;
};

/// Threshold minimizing |APCER - BPCER| over the candidates, lowest
/// threshold on ties.
EqualErrorRate d_eer(const ScoreSet& scores);

/// Lowest BPCER among candidate thresholds with APCER <= target, target in
/// (0, 1]. The -inf candidate always qualifies (APCER 0), so a value exists.
double bpcer_at_apcer(const ScoreSet& scores, double target);

/// Mann-Whitney AUC: P(morphed score > bona fide score), ties count half.
double roc_auc(const ScoreSet& scores);

/// (threshold, APCER, BPCER) at every candidate threshold, ascending.
std::vector<OperatingPoint> det_curve(const ScoreSet& scores);

struct MetricsReport {
  EqualErrorRate deer;
  double bpcer_at_5 = 0.0;
  double bpcer_at_10 = 0.0;
  double auc = 0.0;
};

MetricsReport evaluate(const ScoreSet& scores);

/// CSV `image_id,label,score`.
ScoreSet read_scores_csv(const std::filesystem::path& path);
ScoreSet parse_scores_csv(const std::string& text, const std::string& source = "scores");
std::string scores_csv(const ScoreSet& scores);
/// `{deer, deer_threshold, bpcer_at_5, bpcer_at_10, auc}`; infinite
/// thresholds are written as the strings "inf" / "-inf".
std::string metrics_json(const MetricsReport& report);
/// CSV `threshold,apcer,bpcer`.
std::string det_csv(const std::vector<OperatingPoint>& curve);

} // namespace wavemorph
