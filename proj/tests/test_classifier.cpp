#include "oracles.hpp"

#include "wavemorph/classifier.hpp"
#include "wavemorph/errors.hpp"
#include "wavemorph/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wavemorph;

namespace {

std::vector<FeatureVector> gaussian_classes(std::size_t n, std::size_t dims, double shift,
                                            std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<FeatureVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto label = i % 2 == 0 ? ClassLabel::bonafide : ClassLabel::morphed;
    FeatureVector f{"s" + std::to_string(i), {}, label};
    for (std::size_t j = 0; j < dims; ++j)
      f.values.push_back(g(rng) + (label == ClassLabel::morphed ? shift * (j + 1) : 0.0) + 3.0);
    out.push_back(std::move(f));
  }
  return out;
}

double accuracy(const LinearModel& m, const std::vector<FeatureVector>& data) {
  std::size_t ok = 0;
  for (const auto& f : data) {
    const bool morph = predict(m, f.values) >= 0.5;
    ok += morph == (f.label == ClassLabel::morphed);
  }
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

double relative_error(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8}); }

} // namespace

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 rng(90);
  std::normal_distribution<double> g;
  for (int dataset = 0; dataset < 3; ++dataset) {
    const auto feats = gaussian_classes(40, 3 + dataset, 0.8, rng);
    const auto data = Standardizer::fit(feats).apply(feats);
    for (int point = 0; point < 5; ++point) {
      std::vector<double> w(data.cols);
      for (auto& v : w) v = g(rng);
      const double b = g(rng);
      const double lambda = 0.1 * point;
      std::vector<double> gw;
      double gb = 0.0;
      logistic_objective(data, w, b, lambda, &gw, &gb);
      const double h = 1e-5;
      for (std::size_t j = 0; j < w.size(); ++j) {
        auto wp = w, wm = w;
        wp[j] += h;
        wm[j] -= h;
        const double fd = (logistic_objective(data, wp, b, lambda) - logistic_objective(data, wm, b, lambda)) / (2 * h);
        CHECK(relative_error(gw[j], fd) < 1e-5);
      }
      const double fdb = (logistic_objective(data, w, b + h, lambda) - logistic_objective(data, w, b - h, lambda)) / (2 * h);
      CHECK(relative_error(gb, fdb) < 1e-5);
    }
  }
}

TEST_CASE("separable data is fit perfectly with little regularisation") {
  std::vector<FeatureVector> feats;
  for (int i = 0; i < 20; ++i)
    feats.push_back({"x" + std::to_string(i), {i < 10 ? i * 0.1 : 2.0 + i * 0.1},
                     i < 10 ? ClassLabel::bonafide : ClassLabel::morphed});
  TrainOptions opts;
  opts.lambda = 1e-8;
  const auto m = train(feats, opts);
  CHECK(accuracy(m, feats) == 1.0);
  CHECK(m.final_loss < 0.01);
}

TEST_CASE("huge regularisation drives predictions to one half") {
  std::mt19937_64 rng(3);
  auto feats = gaussian_classes(40, 2, 1.0, rng);
  TrainOptions opts;
  opts.lambda = 1e6;
  const auto m = train(feats, opts);
  for (double w : m.weights) CHECK(std::abs(w) < 1e-5);
  for (const auto& f : feats) CHECK(predict(m, f.values) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("loss is non-increasing over accepted steps and training is deterministic") {
  std::mt19937_64 rng(4);
  const auto feats = gaussian_classes(60, 4, 0.5, rng);
  const auto m = train(feats);
  REQUIRE(m.loss_history.size() >= 2);
  for (std::size_t i = 1; i < m.loss_history.size(); ++i)
    CHECK(m.loss_history[i] <= m.loss_history[i - 1] + 1e-12);
  const auto again = train(feats);
  CHECK(again.weights == m.weights);
  CHECK(again.bias == m.bias);
  CHECK(model_json(again) == model_json(m));
}

TEST_CASE("predict contracts") {
  LinearModel zero;
  zero.weights = {0.0, 0.0};
  zero.standardizer = {{0.0, 0.0}, {1.0, 1.0}};
  CHECK(predict(zero, std::vector<double>{3.0, -2.0}) == 0.5);
  CHECK_THROWS_AS(predict(zero, std::vector<double>{1.0}), InputError);

  std::mt19937_64 rng(6);
  const auto feats = gaussian_classes(50, 3, 0.7, rng);
  const auto m = train(feats);
  const auto batch = predict_batch(m, feats);
  for (std::size_t i = 0; i < feats.size(); ++i) CHECK(batch[i] == predict(m, feats[i].values));

  for (std::size_t j = 0; j < m.dimension(); ++j) {
    auto x = feats[0].values;
    const double before = predict(m, x);
    x[j] += 1.0;
    const double after = predict(m, x);
    if (m.weights[j] > 0) CHECK(after > before);
    if (m.weights[j] < 0) CHECK(after < before);
  }

  const auto parsed = parse_model_json(model_json(m));
  CHECK(parsed.weights == m.weights);
  CHECK(predict(parsed, feats[1].values) == predict(m, feats[1].values));
}

TEST_CASE("training input errors") {
  std::vector<FeatureVector> one_class{{"a", {1.0}, ClassLabel::bonafide}, {"b", {2.0}, ClassLabel::bonafide}};
  CHECK_THROWS_AS(train(one_class), InputError);
  std::vector<FeatureVector> bad{{"a", {1.0}, ClassLabel::bonafide}, {"b", {NAN}, ClassLabel::morphed}};
  CHECK_THROWS_AS(train(bad), InputError);
}

namespace {

std::vector<ImageEntropies> noise_images(std::size_t per_class, Split split, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 8.0);
  std::vector<ImageEntropies> out;
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    ImageEntropies e;
    e.image_id = std::string(to_string(split)) + std::to_string(i);
    e.label = i < per_class ? ClassLabel::bonafide : ClassLabel::morphed;
    e.split = split;
    for (auto& v : e.entropy) v = u(rng);
    out.push_back(e);
  }
  return out;
}

KlRankingTable identity_ranking() {
  KlRankingTable t;
  for (int i = 1; i <= 48; ++i) {
    t.order.push_back(i);
    t.averaged[static_cast<std::size_t>(i - 1)] = 48.0 - i;
  }
  return t;
}

} // namespace

TEST_CASE("sweep on class-independent noise stays near chance") {
  std::mt19937_64 rng(777);
  const auto train_set = noise_images(200, Split::train, rng);
  const auto val_set = noise_images(200, Split::validation, rng);
  const std::vector<int> ks{48, 48, 5};
  const auto pts = sweep_k(identity_ranking(), train_set, val_set, ks);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].k == 48);
  CHECK(pts[0].auc_validation >= 0.35);
  CHECK(pts[0].auc_validation <= 0.65);
  CHECK(pts[0].auc_validation == pts[1].auc_validation);
  CHECK(pts[2].k == 5);
  CHECK_THROWS_AS(sweep_k(identity_ranking(), train_set, val_set, std::vector<int>{0}), InputError);
  CHECK_THROWS_AS(sweep_k(identity_ranking(), {}, val_set, ks), InputError);
}

TEST_CASE("positive affine rescaling of a feature column leaves validation AUC unchanged") {
  std::mt19937_64 rng(12);
  auto train_set = noise_images(60, Split::train, rng);
  auto val_set = noise_images(60, Split::validation, rng);
  // give sub-band 1 some signal
  for (auto* set : {&train_set, &val_set})
    for (auto& e : *set)
      if (e.label == ClassLabel::morphed) e.entropy[0] += 2.0;
  const std::vector<int> ks{3};
  const double base = sweep_k(identity_ranking(), train_set, val_set, ks)[0].auc_validation;
  for (auto* set : {&train_set, &val_set})
    for (auto& e : *set) e.entropy[1] = 2.5 * e.entropy[1] + 1.0;
  CHECK(sweep_k(identity_ranking(), train_set, val_set, ks)[0].auc_validation == base);
}

TEST_CASE("sweep CSV") {
  const std::vector<SweepPoint> pts{{1, 0.5}, {22, 0.975}};
  CHECK(sweep_csv(pts) == "k,auc_validation\n1,0.5\n22,0.975\n");
}
