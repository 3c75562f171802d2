#pragma once

// Independent reference computations for the test suites. Nothing here
// calls into the library's kernels, entropy, KL or metric code.

#include "wavemorph/features.hpp"
#include "wavemorph/metrics.hpp"
#include "wavemorph/plane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <vector>

namespace oracle {

using wavemorph::ClassLabel;
using wavemorph::Plane;

/// out(r,c) = sum_{i,j} col[i] row[j] in((r - d*i) mod H, (c - d*j) mod W)
inline Plane direct_conv2d(const Plane& in, const std::vector<double>& row_taps,
                           const std::vector<double>& col_taps, long d) {
  const long h = static_cast<long>(in.height());
  const long w = static_cast<long>(in.width());
  Plane out(in.width(), in.height());
  for (long r = 0; r < h; ++r)
    for (long c = 0; c < w; ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < col_taps.size(); ++i)
        for (std::size_t j = 0; j < row_taps.size(); ++j) {
          const long rr = (((r - d * static_cast<long>(i)) % h) + h) % h;
          const long cc = (((c - d * static_cast<long>(j)) % w) + w) % w;
          acc += col_taps[i] * row_taps[j] * in.at(rr, cc);
        }
      out.at(r, c) = acc;
    }
  return out;
}

/// Entropy by explicit per-level counting with a separate pass per level.
inline double entropy_by_counting(const std::vector<double>& v, int levels) {
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  if (hi == lo) return 0.0;
  std::vector<int> q(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    int level = static_cast<int>(std::floor((v[i] - lo) * (levels - 1) / (hi - lo)));
    q[i] = std::min(std::max(level, 0), levels - 1);
  }
  double h = 0.0;
  for (int level = 0; level < levels; ++level) {
    const auto count = std::count(q.begin(), q.end(), level);
    if (count == 0) continue;
    const double p = static_cast<double>(count) / static_cast<double>(v.size());
    h += -p * std::log2(p);
  }
  return h;
}

/// Counts samples per bin by scanning each bin interval separately.
inline std::vector<double> histogram_by_scanning(const std::vector<double>& samples,
                                                 const std::vector<double>& edges) {
  const std::size_t bins = edges.size() - 1;
  std::vector<double> mass(bins, 0.0);
  for (std::size_t b = 0; b < bins; ++b) {
    std::size_t count = 0;
    for (double s : samples) {
      const bool last = b + 1 == bins;
      const bool first = b == 0;
      const bool above_lo = first ? true : s >= edges[b];
      const bool below_hi = last ? true : s < edges[b + 1];
      if (above_lo && below_hi) ++count;
    }
    mass[b] = static_cast<double>(count) / static_cast<double>(samples.size());
  }
  return mass;
}

inline double kl_direct(const std::vector<double>& p, const std::vector<double>& q, double eps) {
  double sp = 0.0, sq = 0.0;
  for (double v : p) sp += v + eps;
  for (double v : q) sq += v + eps;
  double d = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double a = (p[k] + eps) / sp;
    const double b = (q[k] + eps) / sq;
    d += a * std::log2(a / b);
  }
  return d;
}

/// Two-loop selection: KL for every (sub-band, dataset), zero-mean each
/// dataset, then average per sub-band.
struct SelectionResult {
  std::vector<std::vector<double>> kl;         // [dataset][subband]
  std::vector<std::vector<double>> zero_meaned; // [dataset][subband]
  std::vector<double> averaged;                 // [subband]
};

inline SelectionResult algorithm_one(const std::vector<std::vector<std::vector<double>>>& bona,
                                     const std::vector<std::vector<std::vector<double>>>& morph,
                                     double eps) {
  const std::size_t datasets = bona.size();
  const std::size_t bands = bona[0].size();
  SelectionResult r;
  r.kl.assign(datasets, std::vector<double>(bands));
  r.zero_meaned = r.kl;
  r.averaged.assign(bands, 0.0);
  for (std::size_t i = 0; i < bands; ++i)
    for (std::size_t j = 0; j < datasets; ++j) r.kl[j][i] = kl_direct(bona[j][i], morph[j][i], eps);
  for (std::size_t j = 0; j < datasets; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < bands; ++i) mean += r.kl[j][i];
    mean /= static_cast<double>(bands);
    for (std::size_t i = 0; i < bands; ++i) r.zero_meaned[j][i] = r.kl[j][i] - mean;
  }
  for (std::size_t i = 0; i < bands; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < datasets; ++j) s += r.zero_meaned[j][i];
    r.averaged[i] = s / static_cast<double>(datasets);
  }
  return r;
}

struct Rates {
  double apcer;
  double bpcer;
};

inline Rates rates_by_counting(const wavemorph::ScoreSet& s, double t) {
  std::size_t nm = 0, nb = 0, miss = 0, false_alarm = 0;
  for (const auto& e : s.entries) {
    if (e.label == ClassLabel::morphed) {
      ++nm;
      if (!(e.score >= t)) ++miss;
    } else {
      ++nb;
      if (e.score >= t) ++false_alarm;
    }
  }
  return {static_cast<double>(miss) / static_cast<double>(nm),
          static_cast<double>(false_alarm) / static_cast<double>(nb)};
}

/// Every score value plus both infinities, each tested directly.
inline std::vector<double> all_thresholds(const wavemorph::ScoreSet& s) {
  std::vector<double> t{-std::numeric_limits<double>::infinity()};
  for (const auto& e : s.entries) t.push_back(e.score);
  t.push_back(std::numeric_limits<double>::infinity());
  std::sort(t.begin(), t.end());
  return t;
}

inline std::pair<double, double> deer_brute(const wavemorph::ScoreSet& s) {
  double best_gap = std::numeric_limits<double>::infinity();
  double rate = 0.0, threshold = 0.0;
  for (double t : all_thresholds(s)) {
    const auto r = rates_by_counting(s, t);
    const double gap = std::abs(r.apcer - r.bpcer);
    if (gap < best_gap) {
      best_gap = gap;
      rate = (r.apcer + r.bpcer) / 2.0;
      threshold = t;
    }
  }
  return {rate, threshold};
}

inline double bpcer_at_apcer_brute(const wavemorph::ScoreSet& s, double target) {
  double best = std::numeric_limits<double>::infinity();
  for (double t : all_thresholds(s)) {
    const auto r = rates_by_counting(s, t);
    if (r.apcer <= target) best = std::min(best, r.bpcer);
  }
  return best;
}

inline double auc_pairs(const wavemorph::ScoreSet& s) {
  double wins = 0.0;
  double pairs = 0.0;
  for (const auto& m : s.entries) {
    if (m.label != ClassLabel::morphed) continue;
    for (const auto& b : s.entries) {
      if (b.label != ClassLabel::bonafide) continue;
      pairs += 1.0;
      if (m.score > b.score)
        wins += 1.0;
      else if (m.score == b.score)
        wins += 0.5;
    }
  }
  return wins / pairs;
}

inline Plane random_plane(std::size_t w, std::size_t h, std::mt19937_64& rng, double lo = 0.0,
                          double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Plane p(w, h);
  for (double& v : p.values()) v = u(rng);
  return p;
}

} // namespace oracle
