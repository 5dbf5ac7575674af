#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>

#include <gtest/gtest.h>

#include "bitext/classify/cross_validation.hpp"
#include "bitext/classify/ensemble.hpp"
#include "bitext/classify/gradient_boosting.hpp"
#include "bitext/classify/metrics.hpp"
#include "bitext/classify/model_io.hpp"
#include "bitext/classify/svm.hpp"
#include "bitext/classify/threshold.hpp"
#include "bitext/error.hpp"
#include "bitext/numkit/rng.hpp"

using namespace bitext;

namespace {

cls::Dataset make(std::vector<std::vector<double>> x, std::vector<int> y) {
  cls::Dataset d;
  for (std::size_t i = 0; i < y.size(); ++i) d.add("r" + std::to_string(i), x[i], y[i]);
  for (std::size_t c = 0; c < d.cols(); ++c) d.feature_names.push_back("f" + std::to_string(c));
  return d;
}

cls::Dataset scalar(std::vector<double> pos, std::vector<double> neg) {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (double v : pos) {
    x.push_back({v});
    y.push_back(1);
  }
  for (double v : neg) {
    x.push_back({v});
    y.push_back(0);
  }
  return make(x, y);
}

class Constant final : public cls::Classifier {
 public:
  Constant(double p, std::size_t arity = 1) : p_(p), arity_(arity) {}
  std::string kind() const override { return "const"; }
  std::size_t arity() const override { return arity_; }
  double predict_proba(std::span<const double> x) const override {
    check_arity(x);
    return p_;
  }
  nlohmann::json to_json() const override { return {{"p", p_}}; }

 private:
  double p_;
  std::size_t arity_;
};

double train_accuracy(const cls::Classifier& m, const cls::Dataset& d) {
  std::vector<int> pred;
  for (const auto& row : d.x) pred.push_back(m.predict(row));
  return cls::accuracy(pred, d.y);
}

cls::Dataset separable(std::size_t n, std::uint64_t seed) {
  num::Rng rng(seed);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
    if (std::abs(a + 0.5 * b) < 0.05) continue;
    x.push_back({a, b, rng.uniform(-1, 1)});
    y.push_back(a + 0.5 * b > 0 ? 1 : 0);
  }
  return make(x, y);
}

}  // namespace

TEST(Metrics, Prf1Examples) {
  const std::vector<int> gold{1, 0, 1, 1, 0};
  const auto perfect = cls::prf1(gold, gold);
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);
  const auto none = cls::prf1(std::vector<int>(5, 0), gold);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.recall, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  // tp 1, fp 1, fn 2
  const auto mixed = cls::prf1(std::vector<int>{1, 1, 0, 0, 0}, gold);
  EXPECT_NEAR(mixed.precision, 0.5, 1e-15);
  EXPECT_NEAR(mixed.recall, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(mixed.f1, 0.4, 1e-15);
  EXPECT_THROW(cls::prf1(std::vector<int>{1}, gold), UsageError);
  EXPECT_NEAR(cls::accuracy(std::vector<int>{1, 1, 0, 0, 0}, gold), 0.4, 1e-15);
}

TEST(Metrics, BinomialDeviance) {
  EXPECT_NEAR(cls::binomial_deviance(std::vector<double>{0.0, 0.0}, std::vector<int>{0, 1}), 2 * std::log(2.0), 1e-15);
}

TEST(Dataset, Validate) {
  auto d = make({{1, 2}, {3, 4}}, {0, 1});
  EXPECT_NO_THROW(d.validate());
  d.x[1].push_back(5);
  EXPECT_THROW(d.validate(), DimensionError);
  auto e = make({{1}, {std::nan("")}}, {0, 1});
  EXPECT_THROW(e.validate(), ParameterError);
  auto f = make({{1}, {2}}, {0, 2});
  EXPECT_THROW(f.validate(), ParameterError);
  auto g = make({{1}, {2}}, {0, 1});
  g.ids[1] = g.ids[0];
  EXPECT_THROW(g.validate(), IntegrityError);
}

TEST(Threshold, Examples) {
  const auto m = cls::threshold_fit(scalar({0.8, 0.9}, {0.1, 0.2}));
  EXPECT_NEAR(m.threshold(), 0.205, 1e-12);
  EXPECT_EQ(m.train_accuracy(), 1.0);
  EXPECT_FALSE(m.warning());
  EXPECT_NEAR(m.predict_proba(std::vector<double>{m.threshold()}), 0.5, 1e-12);
  EXPECT_EQ(m.predict(std::vector<double>{0.9}), 1);
  EXPECT_EQ(m.predict(std::vector<double>{0.2}), 0);

  const auto inv = cls::threshold_fit(scalar({0.1, 0.2}, {0.8, 0.9}));
  EXPECT_LE(inv.train_accuracy(), 0.5);
  EXPECT_TRUE(inv.warning());

  EXPECT_THROW(cls::threshold_fit(scalar({0.1, 0.2}, {})), FittingError);
  EXPECT_THROW(m.predict_proba(std::vector<double>{0.1, 0.2}), UsageError);
}

TEST(Threshold, BruteForceOracle) {
  num::Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 10 + rng.below(200);
    std::vector<double> sims;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
      const int y = i < 2 ? static_cast<int>(i) : static_cast<int>(rng.below(2));
      labels.push_back(y);
      sims.push_back(std::clamp(rng.normal() * 0.2 + (y ? 0.6 : 0.4), -1.0, 1.0));
    }
    double lo_pos = 2, hi_neg = -2;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i]) lo_pos = std::min(lo_pos, sims[i]);
      else hi_neg = std::max(hi_neg, sims[i]);
    }
    const double lo = std::min(lo_pos, hi_neg), hi = std::max(lo_pos, hi_neg);
    double best_t = lo, best_acc = -1;
    const auto steps = static_cast<std::size_t>(std::floor((hi - lo) / 0.005 + 1e-9));
    for (std::size_t k = 0; k <= steps; ++k) {
      const double t = lo + static_cast<double>(k) * 0.005;
      std::size_t ok = 0;
      for (std::size_t i = 0; i < n; ++i) ok += ((sims[i] >= t) == (labels[i] == 1));
      const double acc = static_cast<double>(ok) / static_cast<double>(n);
      if (acc > best_acc) {
        best_acc = acc;
        best_t = t;
      }
    }
    const auto m = cls::threshold_fit(sims, labels);
    EXPECT_EQ(m.threshold(), best_t);
    EXPECT_EQ(m.train_accuracy(), best_acc);
  }
}

TEST(GradientBoosting, DevianceNonIncreasingAndSeparable) {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = -20; i <= 20; ++i) {
    if (i == 0) continue;
    x.push_back({i / 10.0});
    y.push_back(i > 0);
  }
  cls::GbConfig cfg;
  cfg.rounds = 50;
  const auto m = cls::gb_fit(make(x, y), cfg);
  EXPECT_EQ(m.trees().size(), 50u);
  const auto& dev = m.deviance_history();
  ASSERT_EQ(dev.size(), 51u);
  for (std::size_t k = 1; k < dev.size(); ++k) EXPECT_LE(dev[k], dev[k - 1]);
  EXPECT_EQ(train_accuracy(m, make(x, y)), 1.0);

  const auto noisy = separable(300, 4);
  auto flipped = noisy;
  for (std::size_t i = 0; i < flipped.y.size(); i += 7) flipped.y[i] = 1 - flipped.y[i];
  const auto g = cls::gb_fit(flipped);
  for (std::size_t k = 1; k < g.deviance_history().size(); ++k) {
    EXPECT_LE(g.deviance_history()[k], g.deviance_history()[k - 1]);
  }
}

TEST(GradientBoosting, ZeroRoundsIsBaseRate) {
  cls::GbConfig cfg;
  cfg.rounds = 0;
  const auto m = cls::gb_fit(scalar({1, 2, 3}, {4}), cfg);
  EXPECT_NEAR(m.predict_proba(std::vector<double>{0.0}), 0.75, 1e-12);
  EXPECT_THROW(cls::gb_fit(scalar({1, 2}, {})), FittingError);
  // Constant features give single-leaf trees.
  const auto c = cls::gb_fit(scalar({1, 1}, {1, 1}));
  for (const auto& t : c.trees()) EXPECT_EQ(t.leaves(), 1u);
}

TEST(GradientBoosting, DeterministicAndJsonRoundTrip) {
  const auto d = separable(200, 9);
  const auto a = cls::gb_fit(d), b = cls::gb_fit(d);
  EXPECT_EQ(a.to_json(), b.to_json());
  const auto back = cls::GbModel::from_json(a.to_json());
  for (const auto& row : d.x) EXPECT_EQ(back.predict_proba(row), a.predict_proba(row));
}

TEST(Svm, MinimalInstances) {
  const auto two = make({{0, 0}, {1, 1}}, {0, 1});
  const auto m = cls::svm_fit(two);
  EXPECT_EQ(m.support.rows(), 2u);
  EXPECT_EQ(train_accuracy(m, two), 1.0);
  EXPECT_GT(m.decision(std::vector<double>{0.9, 0.9}), 0.0);
  EXPECT_LT(m.decision(std::vector<double>{0.1, 0.1}), 0.0);

  const auto xr = make({{0, 0}, {1, 1}, {0, 1}, {1, 0}}, {0, 0, 1, 1});
  cls::SvmConfig cfg;
  cfg.c = 10.0;
  const auto x = cls::svm_fit(xr, cfg);
  EXPECT_EQ(train_accuracy(x, xr), 1.0);
  for (double a : x.coef) EXPECT_LE(std::abs(a), cfg.c + 1e-12);
  for (const auto& row : xr.x) {
    const double p = x.predict_proba(row);
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
  }

  const auto contradict = make({{0.5}, {0.5}, {0.0}, {1.0}}, {0, 1, 0, 1});
  EXPECT_NO_THROW(cls::svm_fit(contradict));
}

TEST(Svm, IterationCap) {
  cls::SvmConfig cfg;
  cfg.max_iter = 1;
  EXPECT_THROW(cls::svm_fit(separable(100, 2), cfg), ConvergenceError);
}

TEST(Ensemble, MeanOfMembers) {
  const cls::EnsembleModel e({std::make_shared<Constant>(0.2), std::make_shared<Constant>(0.8)});
  EXPECT_NEAR(e.predict_proba(std::vector<double>{0.0}), 0.5, 1e-15);
  EXPECT_EQ(e.predict(std::vector<double>{0.0}), 1);
  EXPECT_THROW(cls::EnsembleModel({}), UsageError);
  EXPECT_THROW(cls::EnsembleModel({std::make_shared<Constant>(0.2), std::make_shared<Constant>(0.2, 2)}),
               UsageError);
}

TEST(ModelIo, RoundTripAllKinds) {
  const auto dir = std::filesystem::temp_directory_path() / "bitext_model_io";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto d = separable(120, 5);
  auto gb = std::make_shared<cls::GbModel>(cls::gb_fit(d));
  auto svm = std::make_shared<cls::SvmModel>(cls::svm_fit(d));
  const cls::EnsembleModel ens({gb, svm});
  const cls::ThresholdModel thr(0.3, 0.9, false);
  const std::vector<const cls::Classifier*> models{gb.get(), svm.get(), &ens};
  for (const auto* m : models) {
    const auto path = dir / (m->kind() + ".json");
    cls::save_classifier(*m, path);
    const auto back = cls::load_classifier(path);
    EXPECT_EQ(back->kind(), m->kind());
    for (const auto& row : d.x) EXPECT_EQ(back->predict_proba(row), m->predict_proba(row));
  }
  cls::save_classifier(thr, dir / "thr.json");
  EXPECT_EQ(cls::load_classifier(dir / "thr.json")->predict(std::vector<double>{0.3}), 1);
  std::filesystem::remove_all(dir);
}

TEST(CrossValidation, FoldsAndLeaveOneOut) {
  const auto d = scalar({0.9, 0.8, 0.7, 0.6}, {0.1, 0.2, 0.3});
  const auto a = cls::stratified_folds(d.y, 3, 5), b = cls::stratified_folds(d.y, 3, 5);
  EXPECT_EQ(a, b);
  const auto loo = cls::kfold_cv(d, d.rows(), [](const cls::Dataset& t) {
    return std::make_unique<cls::ThresholdModel>(cls::threshold_fit(t));
  }, 1);
  EXPECT_EQ(loo.folds.size(), d.rows());
  // Holding out 0.3 leaves negatives up to 0.2, so the smallest perfect
  // training threshold is 0.205 and that row is called positive.
  EXPECT_NEAR(loo.pooled_accuracy, 6.0 / 7.0, 1e-15);
  EXPECT_THROW(cls::stratified_folds(d.y, 1, 1), PartitionError);
  EXPECT_THROW(cls::stratified_folds(d.y, 8, 1), PartitionError);
  EXPECT_THROW(cls::stratified_folds(std::vector<int>{1, 1, 1, 0}, 2, 1), PartitionError);
}

TEST(CrossValidation, ConstantModelScoresBaseRate) {
  std::vector<double> pos(30, 0.5), neg(10, 0.5);
  const auto d = scalar(pos, neg);
  const auto r = cls::kfold_cv(d, 10, [](const cls::Dataset&) { return std::make_unique<Constant>(0.9); }, 3);
  EXPECT_NEAR(r.pooled_accuracy, 0.75, 1e-12);
  EXPECT_NEAR(r.mean_accuracy, 0.75, 1e-12);
  for (const auto& f : r.folds) {
    EXPECT_EQ(f.rows, 4u);
    EXPECT_NEAR(f.accuracy, 0.75, 1e-12);
  }
}
