#pragma once

#include "wavemorph/features.hpp"
#include "wavemorph/selection.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace wavemorph {

/// Entropies (bits) of the selected sub-bands, in selection order.
struct FeatureVector {
  std::string image_id;
  std::vector<double> values;
  ClassLabel label = ClassLabel::bonafide;
};

std::vector<FeatureVector> select_features(std::span<const ImageEntropies> images,
                                           std::span<const int> indices);

/// Standardized design matrix (row-major) with 0/1 targets (1 = morphed).
struct DesignMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<double> y;
};

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale; // population std, floored at 1e-8

  static Standardizer fit(std::span<const FeatureVector> features);
  DesignMatrix apply(std::span<const FeatureVector> features) const;
};

/// Mean logistic loss plus lambda/2 * |w|^2 (bias unregularised). When the
/// gradient outputs are non-null they receive d/dw and d/db.
double logistic_objective(const DesignMatrix& data, std::span<const double> weights, double bias,
                          double lambda, std::vector<double>* grad_weights = nullptr,
                          double* grad_bias = nullptr);

struct TrainOptions {
  double lambda = 1e-3;
  int max_iters = 5000;
  double tol = 1e-8; // on the gradient norm
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 0.0;
  Standardizer standardizer;
  int iterations = 0;
  double final_loss = 0.0;
  std::vector<double> loss_history; // objective after every accepted step, starting at init

  std::size_t dimension() const noexcept { return weights.size(); }
};

/// Full-batch gradient descent with Armijo backtracking from zero init.
/// Throws InputError on single-class or non-finite input.
LinearModel train(std::span<const FeatureVector> features, const TrainOptions& options = {});

/// sigmoid(w . standardized(x) + b); higher means more morph-like.
double predict(const LinearModel& model, std::span<const double> values);
std::vector<double> predict_batch(const LinearModel& model, std::span<const FeatureVector> features);

std::string model_json(const LinearModel& model);
LinearModel parse_model_json(const std::string& text);

struct SweepPoint {
  int k = 0;
  double auc_validation = 0.0;
};

/// For each k: take the top-k ranked sub-bands, train on `train_set`, and
/// report ROC AUC on `validation_set`. Points come back in k_values order.
std::vector<SweepPoint> sweep_k(const KlRankingTable& ranking,
                                std::span<const ImageEntropies> train_set,
                                std::span<const ImageEntropies> validation_set,
                                std::span<const int> k_values, const TrainOptions& options = {},
                                int workers = 0);

/// CSV `k,auc_validation`.
std::string sweep_csv(std::span<const SweepPoint> points);

} // namespace wavemorph
