#include "wavemorph/classifier.hpp"

#include "wavemorph/errors.hpp"
#include "wavemorph/metrics.hpp"
#include "wavemorph/text.hpp"

#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <sstream>

namespace wavemorph {

std::vector<FeatureVector> select_features(std::span<const ImageEntropies> images,
                                           std::span<const int> indices) {
  std::vector<FeatureVector> out;
  out.reserve(images.size());
  for (const auto& img : images) {
    FeatureVector f{img.image_id, {}, img.label};
    f.values.reserve(indices.size());
    for (int idx : indices) {
      if (idx < 1 || idx > kNumSubbands) throw InputError("sub-band index out of range");
      f.values.push_back(img.entropy[static_cast<std::size_t>(idx - 1)]);
    }
    out.push_back(std::move(f));
  }
  return out;
}

Standardizer Standardizer::fit(std::span<const FeatureVector> features) {
  if (features.empty()) throw InputError("cannot standardize an empty feature set");
  const std::size_t k = features[0].values.size();
  Standardizer s{std::vector<double>(k, 0.0), std::vector<double>(k, 0.0)};
  for (const auto& f : features) {
    if (f.values.size() != k) throw InputError("feature vectors have different lengths");
    for (std::size_t j = 0; j < k; ++j) {
      if (!std::isfinite(f.values[j])) throw InputError("non-finite feature for '" + f.image_id + "'");
      s.mean[j] += f.values[j];
    }
  }
  const double n = static_cast<double>(features.size());
  for (auto& m : s.mean) m /= n;
  for (const auto& f : features)
    for (std::size_t j = 0; j < k; ++j) s.scale[j] += (f.values[j] - s.mean[j]) * (f.values[j] - s.mean[j]);
  for (auto& v : s.scale) v = std::max(std::sqrt(v / n), 1e-8);
  return s;
}

DesignMatrix Standardizer::apply(std::span<const FeatureVector> features) const {
  DesignMatrix d;
  d.rows = features.size();
  d.cols = mean.size();
  d.x.reserve(d.rows * d.cols);
  d.y.reserve(d.rows);
  for (const auto& f : features) {
    if (f.values.size() != d.cols)
      throw InputError("feature dimension " + std::to_string(f.values.size()) + " != model dimension " +
                       std::to_string(d.cols));
    for (std::size_t j = 0; j < d.cols; ++j) d.x.push_back((f.values[j] - mean[j]) / scale[j]);
    d.y.push_back(f.label == ClassLabel::morphed ? 1.0 : 0.0);
  }
  return d;
}

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

} // namespace

double logistic_objective(const DesignMatrix& data, std::span<const double> weights, double bias,
                          double lambda, std::vector<double>* grad_weights, double* grad_bias) {
  if (weights.size() != data.cols) throw InputError("weight dimension mismatch");
  const double n = static_cast<double>(data.rows);
  double loss = 0.0;
  if (grad_weights) grad_weights->assign(data.cols, 0.0);
  double gb = 0.0;
  for (std::size_t i = 0; i < data.rows; ++i) {
    const double* xi = &data.x[i * data.cols];
    double z = bias;
    for (std::size_t j = 0; j < data.cols; ++j) z += weights[j] * xi[j];
    loss += softplus(z) - data.y[i] * z;
    const double r = sigmoid(z) - data.y[i];
    gb += r;
    if (grad_weights)
      for (std::size_t j = 0; j < data.cols; ++j) (*grad_weights)[j] += r * xi[j];
  }
  loss /= n;
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  loss += 0.5 * lambda * reg;
  if (grad_weights)
    for (std::size_t j = 0; j < data.cols; ++j) (*grad_weights)[j] = (*grad_weights)[j] / n + lambda * weights[j];
  if (grad_bias) *grad_bias = gb / n;
  return loss;
}

LinearModel train(std::span<const FeatureVector> features, const TrainOptions& options) {
  if (!(options.lambda >= 0.0)) throw InputError("lambda must be non-negative");
  if (options.max_iters < 0) throw InputError("max_iters must be non-negative");
  bool has_bona = false, has_morph = false;
  for (const auto& f : features) (f.label == ClassLabel::bonafide ? has_bona : has_morph) = true;
  if (!has_bona || !has_morph) throw InputError("training needs both bonafide and morphed samples");

  LinearModel m;
  m.lambda = options.lambda;
  m.standardizer = Standardizer::fit(features);
  const DesignMatrix data = m.standardizer.apply(features);
  m.weights.assign(data.cols, 0.0);

  std::vector<double> gw, trial_w(data.cols);
  double gb = 0.0;
  double loss = logistic_objective(data, m.weights, m.bias, m.lambda, &gw, &gb);
  m.loss_history.push_back(loss);
  double step = 1.0;
  constexpr double kArmijo = 1e-4;

  for (int it = 0; it < options.max_iters; ++it) {
    double g2 = gb * gb;
    for (double g : gw) g2 += g * g;
    if (std::sqrt(g2) < options.tol) break;

    step = std::min(step * 2.0, 1e6);
    double trial_loss = 0.0;
    bool accepted = false;
    while (step > 1e-20) {
      for (std::size_t j = 0; j < data.cols; ++j) trial_w[j] = m.weights[j] - step * gw[j];
      const double trial_b = m.bias - step * gb;
      trial_loss = logistic_objective(data, trial_w, trial_b, m.lambda);
      if (trial_loss <= loss - kArmijo * step * g2) {
        m.weights = trial_w;
        m.bias = trial_b;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    loss = logistic_objective(data, m.weights, m.bias, m.lambda, &gw, &gb);
    m.loss_history.push_back(loss);
    m.iterations = it + 1;
  }
  m.final_loss = loss;
  for (double w : m.weights)
    if (!std::isfinite(w)) throw InvariantError("training produced non-finite weights");
  return m;
}

double predict(const LinearModel& model, std::span<const double> values) {
  if (values.size() != model.dimension())
    throw InputError("feature dimension " + std::to_string(values.size()) + " != model dimension " +
                     std::to_string(model.dimension()));
  double z = model.bias;
  for (std::size_t j = 0; j < values.size(); ++j)
    z += model.weights[j] * (values[j] - model.standardizer.mean[j]) / model.standardizer.scale[j];
  return sigmoid(z);
}

std::vector<double> predict_batch(const LinearModel& model, std::span<const FeatureVector> features) {
  std::vector<double> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back(predict(model, f.values));
  return out;
}

std::string model_json(const LinearModel& m) {
  nlohmann::json j = {
      {"weights", m.weights},
      {"bias", m.bias},
      {"mean", m.standardizer.mean},
      {"scale", m.standardizer.scale},
      {"lambda", m.lambda},
      {"iterations", m.iterations},
      {"final_loss", m.final_loss},
  };
  return j.dump(2) + "\n";
}

LinearModel parse_model_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    LinearModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.standardizer.mean = j.at("mean").get<std::vector<double>>();
    m.standardizer.scale = j.at("scale").get<std::vector<double>>();
    m.lambda = j.at("lambda").get<double>();
    m.iterations = j.at("iterations").get<int>();
    m.final_loss = j.at("final_loss").get<double>();
    if (m.standardizer.mean.size() != m.weights.size() || m.standardizer.scale.size() != m.weights.size())
      throw InputError("model JSON: inconsistent dimensions");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model JSON: ") + e.what());
  }
}

std::vector<SweepPoint> sweep_k(const KlRankingTable& ranking,
                                std::span<const ImageEntropies> train_set,
                                std::span<const ImageEntropies> validation_set,
                                std::span<const int> k_values, const TrainOptions& options,
                                int workers) {
  if (train_set.empty() || validation_set.empty())
    throw InputError("sweep needs non-empty train and validation splits");
  for (int k : k_values)
    if (k < 1 || k > kNumSubbands) throw InputError("sweep k must be in [1,48], got " + std::to_string(k));

  std::vector<SweepPoint> out(k_values.size());
  std::vector<std::string> errors(k_values.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < static_cast<long>(k_values.size()); ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      const int k = k_values[u];
      const auto indices = select(ranking, TopK{k});
      const auto train_features = select_features(train_set, indices);
      const auto val_features = select_features(validation_set, indices);
      const LinearModel model = train(train_features, options);
      ScoreSet scores;
      const auto preds = predict_batch(model, val_features);
      for (std::size_t r = 0; r < preds.size(); ++r)
        scores.entries.push_back({val_features[r].image_id, val_features[r].label, preds[r]});
      out[u] = {k, roc_auc(scores)};
    } catch (const std::exception& e) {
      errors[u] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw InputError("sweep failed: " + e);
  return out;
}

std::string sweep_csv(std::span<const SweepPoint> points) {
  std::ostringstream os;
  os << "k,auc_validation\n";
  for (const auto& p : points) os << p.k << ',' << format_double(p.auc_validation) << '\n';
  return os.str();
}

} // namespace wavemorph
